"""Built-in model problems.

The flagship model is a magnetohydrodynamic boundary-layer flow over a
flat plate.  Writing u1 = u, u2 = u', u3 = u'', the third-order equation
u''' + u u'' + beta (1 - u') = 0 becomes the first-order system

    u1' = u2
    u2' = u3
    u3' = -u1 u3 - beta (1 - u2)

with u1(0) = 0, u2(0) = 0 and u2(inf) = 1.  beta = 0 recovers the classical
Blasius flow.  The quantity of interest is the wall shear u''(0), i.e. the
third state component at the first node.
"""

from __future__ import annotations

import math

import numpy as np

from .mesh import GridMap, Mesh, build_mesh
from .newton import NewtonConfig, SolutionGrid, newton_solve
from .problem import BvpSystem, InitialGuess

_MHD_DG_FIRST = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]])
_MHD_DG_LAST = np.array([[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
_MHD_DG_FIRST.setflags(write=False)
_MHD_DG_LAST.setflags(write=False)


def mhd_system(beta: float) -> BvpSystem:
    """The MHD flat-plate boundary-layer flow with pressure-gradient beta.

    Analytic Jacobians are attached for both the field equations and the
    boundary relations.
    """
    beta = float(beta)
    if not math.isfinite(beta):
        raise ValueError(f"beta must be finite, got {beta!r}")

    def f(x: float, u: np.ndarray) -> np.ndarray:
        return np.array([u[1], u[2], -u[0] * u[2] - beta * (1.0 - u[1])])

    def jac_f(x: float, u: np.ndarray) -> np.ndarray:
        return np.array([
            [0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0],
            [-u[2], beta, -u[0]],
        ])

    def g(u0: np.ndarray, uinf: np.ndarray) -> np.ndarray:
        return np.array([u0[0], u0[1], uinf[1] - 1.0])

    def jac_g(u0: np.ndarray, uinf: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return _MHD_DG_FIRST, _MHD_DG_LAST

    return BvpSystem(d=3, f=f, g=g, jac_f=jac_f, jac_g=jac_g)


def blasius_system() -> BvpSystem:
    """The Blasius flow, i.e. the MHD model with beta = 0."""
    return mhd_system(0.0)


def mhd_initial_guess() -> InitialGuess:
    """Starting profile (x/2, 1, exp(-x)) for the MHD model.

    At the infinity node the first component is extended linearly over the
    last interval (slope taken from the second component, which is 1), the
    second is its far-field value 1 and the third decays to 0.
    """

    def profile(x: float) -> np.ndarray:
        return np.array([0.5 * x, 1.0, math.exp(-x)])

    def tail(mesh: Mesh) -> np.ndarray:
        return np.array([0.5 * mesh.nodes[-2] + 0.5 * mesh.a[-1], 1.0, 0.0])

    return InitialGuess(eval=profile, at_infinity=tail)


def wall_shear(solution: SolutionGrid) -> float:
    """u''(0) of a boundary-layer solution: the third component at node 0."""
    if solution.U.shape[1] != 3:
        raise ValueError(
            f"wall shear requires a 3-component boundary-layer state, got d={solution.U.shape[1]}"
        )
    return float(solution.U[0, 2])


def solve_mhd(
    beta: float,
    grid_map: GridMap | None = None,
    N: int = 1000,
    config: NewtonConfig | None = None,
) -> SolutionGrid:
    """Solve the MHD model from the standard starting profile.

    Defaults reproduce the reference setup: logarithmic map with c = 2,
    N = 1000 intervals and tol = 1e-8.
    """
    grid_map = grid_map or GridMap()
    mesh = build_mesh(grid_map, N)
    state = mhd_initial_guess().on_mesh(mesh)
    return newton_solve(mhd_system(beta), mesh, state, config or NewtonConfig())
