"""Nonlinear two-point boundary value problems on [0, inf).

The domain is kept semi-infinite: a quasi-uniform grid places its last node
at infinity, and the finite difference scheme leans on interval quarter
points so that no formula ever evaluates anything there.  Newton iteration
with a structured sparse Jacobian solves the discrete system; mesh-doubling
continuation and Richardson extrapolation sharpen scalar outputs.
"""

from .continuation import (
    RichardsonLadder,
    continuation_solve,
    extrapolate,
    interpolate_to_refined,
    observed_order,
)
from .errors import (
    ConfigurationError,
    ContinuationError,
    DivergenceError,
    EvaluationError,
    LinearSolveError,
    SemibvpError,
)
from .mesh import ALGEBRAIC, LOGARITHMIC, GridMap, Mesh, build_mesh, refine
from .models import blasius_system, mhd_initial_guess, mhd_system, solve_mhd, wall_shear
from .newton import (
    NewtonConfig,
    SolutionGrid,
    StructuredJacobian,
    jacobian,
    newton_solve,
    residual,
    solve_linear,
)
from .problem import (
    BvpSystem,
    Diagnostic,
    InitialGuess,
    fd_jacobian_f,
    fd_jacobian_g,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "ALGEBRAIC",
    "LOGARITHMIC",
    "BvpSystem",
    "ConfigurationError",
    "ContinuationError",
    "Diagnostic",
    "DivergenceError",
    "EvaluationError",
    "GridMap",
    "InitialGuess",
    "LinearSolveError",
    "Mesh",
    "NewtonConfig",
    "RichardsonLadder",
    "SemibvpError",
    "SolutionGrid",
    "StructuredJacobian",
    "blasius_system",
    "build_mesh",
    "continuation_solve",
    "extrapolate",
    "fd_jacobian_f",
    "fd_jacobian_g",
    "interpolate_to_refined",
    "jacobian",
    "mhd_initial_guess",
    "mhd_system",
    "newton_solve",
    "observed_order",
    "refine",
    "residual",
    "solve_linear",
    "solve_mhd",
    "validate",
    "wall_shear",
]
