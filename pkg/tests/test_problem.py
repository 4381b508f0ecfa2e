"""Problem containers, finite-difference Jacobians and system validation."""

import numpy as np
import pytest

from semibvp.errors import (
    ConfigurationError,
    ContinuationError,
    DivergenceError,
    EvaluationError,
    LinearSolveError,
    SemibvpError,
)
from semibvp.mesh import GridMap, build_mesh
from semibvp.problem import (
    BvpSystem,
    InitialGuess,
    fd_jacobian_f,
    fd_jacobian_g,
    validate,
)


def scalar_decay():
    return BvpSystem(
        d=1,
        f=lambda x, u: np.array([-u[0]]),
        g=lambda u0, uinf: np.array([u0[0] - 1.0]),
    )


# --------------------------------------------------------------- fd Jacobians

def test_fd_jacobian_identity():
    sys_ = BvpSystem(d=1, f=lambda x, u: u.copy(), g=lambda u0, uinf: u0 - 1.0)
    J = fd_jacobian_f(sys_, 0.3, np.array([2.0]))
    assert abs(J[0, 0] - 1.0) < 1e-7


def test_fd_jacobian_explicit_step():
    # with f = u^2 a forward difference of step h returns exactly 2u + h
    sys_ = BvpSystem(d=1, f=lambda x, u: u * u, g=lambda u0, uinf: u0)
    J = fd_jacobian_f(sys_, 0.0, np.array([1.0]), eps=1e-3)
    assert abs(J[0, 0] - 2.001) < 1e-9


def test_fd_jacobian_matches_analytic_coupled_system():
    def f(x, u):
        return np.array([u[1], -np.sin(u[0]) - 0.2 * u[1]])

    def jac(x, u):
        return np.array([[0.0, 1.0], [-np.cos(u[0]), -0.2]])

    sys_ = BvpSystem(d=2, f=f, g=lambda u0, uinf: u0)
    u = np.array([0.7, -1.1])
    assert np.allclose(fd_jacobian_f(sys_, 1.0, u), jac(1.0, u), atol=1e-6)


def test_fd_jacobian_g_blocks():
    def g(u0, uinf):
        return np.array([u0[0] * uinf[1], u0[1] - 2.0 * uinf[0]])

    sys_ = BvpSystem(d=2, f=lambda x, u: u, g=g)
    u0 = np.array([1.5, -0.5])
    uinf = np.array([2.0, 3.0])
    G0, GN = fd_jacobian_g(sys_, u0, uinf)
    assert np.allclose(G0, [[3.0, 0.0], [0.0, 1.0]], atol=1e-5)
    assert np.allclose(GN, [[0.0, 1.5], [-2.0, 0.0]], atol=1e-5)


# -------------------------------------------------------------- initial guess

def test_guess_materializes_on_mesh():
    mesh = build_mesh(GridMap(), 6)
    guess = InitialGuess(
        eval=lambda x: np.array([np.exp(-x), x]),
        at_infinity=np.array([0.0, 50.0]),
    )
    U = guess.on_mesh(mesh)
    assert U.shape == (7, 2)
    assert U[0, 0] == 1.0 and U[0, 1] == 0.0
    assert np.allclose(U[3], [np.exp(-mesh.nodes[3]), mesh.nodes[3]])
    assert np.array_equal(U[-1], [0.0, 50.0])


def test_guess_tail_may_depend_on_mesh():
    mesh = build_mesh(GridMap(), 6)
    guess = InitialGuess(
        eval=lambda x: np.array([x]),
        at_infinity=lambda m: np.array([m.nodes[-2] + 1.0]),
    )
    U = guess.on_mesh(mesh)
    assert U[-1, 0] == mesh.nodes[-2] + 1.0


def test_guess_rejects_non_finite():
    mesh = build_mesh(GridMap(), 4)
    guess = InitialGuess(eval=lambda x: np.array([1.0 / (x - 1e9)]),
                         at_infinity=np.array([np.inf]))
    with pytest.raises(ValueError, match="non-finite"):
        guess.on_mesh(mesh)


# ----------------------------------------------------------------- validation

def test_validate_clean_system_is_silent():
    def f(x, u):
        return np.array([u[1], -u[0]])

    def jac(x, u):
        return np.array([[0.0, 1.0], [-1.0, 0.0]])

    sys_ = BvpSystem(d=2, f=f, g=lambda u0, uinf: u0.copy(), jac_f=jac)
    assert validate(sys_) == []


def test_validate_flags_dimension_mismatch():
    sys_ = BvpSystem(d=3, f=lambda x, u: u[:2], g=lambda u0, uinf: u0)
    kinds = {d.kind for d in validate(sys_)}
    assert "dimension" in kinds


@pytest.mark.filterwarnings("ignore:invalid value encountered in sqrt")
def test_validate_flags_non_finite():
    # sqrt goes nan on the negative probe states on purpose
    sys_ = BvpSystem(d=1, f=lambda x, u: np.sqrt(u), g=lambda u0, uinf: u0)
    kinds = {d.kind for d in validate(sys_)}
    assert "non-finite" in kinds


def test_validate_flags_wrong_jacobian():
    sys_ = BvpSystem(
        d=1,
        f=lambda x, u: -u,
        g=lambda u0, uinf: u0,
        jac_f=lambda x, u: np.array([[5.0]]),  # should be -1
    )
    kinds = {d.kind for d in validate(sys_)}
    assert kinds == {"jacobian"}


def test_validate_reports_each_kind_once():
    sys_ = BvpSystem(d=3, f=lambda x, u: u[:1], g=lambda u0, uinf: u0[:1])
    diags = validate(sys_)
    assert len([d for d in diags if d.kind == "dimension"]) == 1


def test_validate_rejects_zero_dimension():
    sys_ = BvpSystem(d=0, f=lambda x, u: u, g=lambda u0, uinf: u0)
    diags = validate(sys_)
    assert len(diags) == 1 and diags[0].kind == "dimension"


# ------------------------------------------------------------ error hierarchy

def test_error_hierarchy():
    assert issubclass(ConfigurationError, SemibvpError)
    assert issubclass(ConfigurationError, ValueError)
    assert issubclass(EvaluationError, SemibvpError)
    assert issubclass(EvaluationError, RuntimeError)
    for exc in (DivergenceError, LinearSolveError, ContinuationError):
        assert issubclass(exc, SemibvpError)
    err = ContinuationError("stalled", level=2, update_norm=0.5)
    assert err.level == 2 and err.update_norm == 0.5
