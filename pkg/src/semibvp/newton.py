"""Scheme assembly and the damped Newton driver.

The unknowns are the node states U_0 .. U_N stacked row-wise.  Interval n
contributes the d equations

    U[n+1] - U[n] - a[n] * f(x12[n], b[n]*U[n+1] + c[n]*U[n]) = 0

and the boundary function supplies the final d rows g(U[0], U[N]) = 0.
The Jacobian of this residual is block two-diagonal with one dense border
row, and is factorized in O(N * d^3) time through a sparse LU.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import splu

from .errors import ConfigurationError, DivergenceError, EvaluationError, LinearSolveError
from .mesh import Mesh
from .problem import BvpSystem, fd_jacobian_f, fd_jacobian_g


@dataclass(frozen=True)
class NewtonConfig:
    """Newton iteration controls.

    tol bounds the mean absolute update over all d*(N+1) unknowns.
    damping is the step-shrink factor applied when the residual norm grows;
    damping = 1.0 disables the line search (plain Newton).
    """

    tol: float = 1e-8
    max_iter: int = 25
    damping: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.tol) and self.tol > 0.0):
            raise ConfigurationError(f"tol must be finite and positive, got {self.tol!r}")
        if self.max_iter < 1:
            raise ConfigurationError(f"max_iter must be at least 1, got {self.max_iter}")
        if not 0.0 < self.damping <= 1.0:
            raise ConfigurationError(f"damping must lie in (0, 1], got {self.damping!r}")


@dataclass(frozen=True, eq=False)
class SolutionGrid:
    """A state matrix on a mesh together with its convergence record."""

    mesh: Mesh
    U: np.ndarray  # (N+1, d) node states
    iterations: int  # number of linear solves performed
    converged: bool
    final_update_norm: float


@dataclass(frozen=True, eq=False)
class StructuredJacobian:
    """Block two-diagonal Newton matrix with a dense boundary border.

    Interval row n carries ``diag[n]`` in block column n and ``upper[n]`` in
    block column n+1.  The final block row holds bc_first in column 0 and
    bc_last in column N.
    """

    diag: np.ndarray  # (N, d, d)
    upper: np.ndarray  # (N, d, d)
    bc_first: np.ndarray  # (d, d)
    bc_last: np.ndarray  # (d, d)

    @property
    def n_intervals(self) -> int:
        return self.diag.shape[0]

    @property
    def d(self) -> int:
        return self.diag.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        m = (self.n_intervals + 1) * self.d
        return (m, m)

    def to_sparse(self) -> sparse.csc_matrix:
        N, d = self.n_intervals, self.d
        rows_blk = (np.arange(N) * d)[:, None, None] + np.arange(d)[None, :, None]
        cols_blk = (np.arange(N) * d)[:, None, None] + np.arange(d)[None, None, :]
        rows_blk = np.broadcast_to(rows_blk, (N, d, d))
        cols_blk = np.broadcast_to(cols_blk, (N, d, d))
        bc_rows = N * d + np.repeat(np.arange(d), d)
        bc_cols_first = np.tile(np.arange(d), d)
        bc_cols_last = N * d + bc_cols_first
        rows = np.concatenate([rows_blk.ravel(), rows_blk.ravel(), bc_rows, bc_rows])
        cols = np.concatenate([cols_blk.ravel(), (cols_blk + d).ravel(), bc_cols_first, bc_cols_last])
        data = np.concatenate(
            [self.diag.ravel(), self.upper.ravel(), self.bc_first.ravel(), self.bc_last.ravel()]
        )
        return sparse.coo_matrix((data, (rows, cols)), shape=self.shape).tocsc()

    def to_dense(self) -> np.ndarray:
        return self.to_sparse().toarray()


def _check_state(system: BvpSystem, mesh: Mesh, U: np.ndarray) -> np.ndarray:
    U = np.asarray(U, dtype=float)
    if U.shape != (mesh.N + 1, system.d):
        raise ValueError(f"state matrix must have shape {(mesh.N + 1, system.d)}, got {U.shape}")
    return U


def _midpoint_states(mesh: Mesh, U: np.ndarray) -> np.ndarray:
    return mesh.b[:, None] * U[1:] + mesh.c[:, None] * U[:-1]


def residual(system: BvpSystem, mesh: Mesh, U: np.ndarray) -> np.ndarray:
    """Evaluate the scheme residual as an (N+1, d) array.

    Rows 0..N-1 are the interval equations; row N is g(U[0], U[N]).
    Non-finite model output raises EvaluationError with the node index.
    """
    U = _check_state(system, mesh, U)
    N, d = mesh.N, system.d
    assert np.isfinite(mesh.x12).all()  # the scheme never touches the sentinel
    W = _midpoint_states(mesh, U)
    F = np.empty((N, d))
    first = np.atleast_1d(np.asarray(system.f(float(mesh.x12[0]), W[0]), dtype=float))
    if first.shape != (d,):
        raise ValueError(f"f must return a vector of length {d}, got shape {first.shape}")
    F[0] = first
    for n in range(1, N):
        F[n] = system.f(float(mesh.x12[n]), W[n])
    if not np.isfinite(F).all():
        bad = int(np.flatnonzero(~np.isfinite(F).all(axis=1))[0])
        raise EvaluationError(
            f"f returned a non-finite value on interval {bad} (x = {mesh.x12[bad]:.6g})", node=bad
        )
    R = np.empty((N + 1, d))
    R[:N] = U[1:] - U[:-1] - mesh.a[:, None] * F
    gv = np.atleast_1d(np.asarray(system.g(U[0], U[N]), dtype=float))
    if gv.shape != (d,):
        raise ValueError(f"g must return a vector of length {d}, got shape {gv.shape}")
    if not np.isfinite(gv).all():
        raise EvaluationError("g returned a non-finite value", node=N)
    R[N] = gv
    return R


def jacobian(system: BvpSystem, mesh: Mesh, U: np.ndarray) -> StructuredJacobian:
    """Assemble the structured Jacobian of the residual at U.

    Interval row n holds -I - a*c*Jf in block column n and I - a*b*Jf in
    block column n+1, with Jf evaluated at the blended midpoint state.
    Analytic Jacobians are used when the system provides them.
    """
    U = _check_state(system, mesh, U)
    N, d = mesh.N, system.d
    W = _midpoint_states(mesh, U)
    eye = np.eye(d)
    jf = system.jac_f if system.jac_f is not None else (
        lambda x, u: fd_jacobian_f(system, x, u)
    )
    diag = np.empty((N, d, d))
    upper = np.empty((N, d, d))
    for n in range(N):
        Jf = np.asarray(jf(float(mesh.x12[n]), W[n]), dtype=float)
        diag[n] = -eye - (mesh.a[n] * mesh.c[n]) * Jf
        upper[n] = eye - (mesh.a[n] * mesh.b[n]) * Jf
    if not (np.isfinite(diag).all() and np.isfinite(upper).all()):
        bad = int(np.flatnonzero(~np.isfinite(diag.reshape(N, -1)).all(axis=1)
                                 | ~np.isfinite(upper.reshape(N, -1)).all(axis=1))[0])
        raise EvaluationError(f"Jacobian of f is non-finite on interval {bad}", node=bad)
    if system.jac_g is not None:
        G0, GN = (np.asarray(m, dtype=float) for m in system.jac_g(U[0], U[N]))
    else:
        G0, GN = fd_jacobian_g(system, U[0], U[N])
    if not (np.isfinite(G0).all() and np.isfinite(GN).all()):
        raise EvaluationError("Jacobian of g is non-finite", node=N)
    return StructuredJacobian(diag=diag, upper=upper, bc_first=G0, bc_last=GN)


def solve_linear(jac: StructuredJacobian, rhs: np.ndarray) -> np.ndarray:
    """Solve jac @ x = rhs exploiting the banded-plus-border sparsity.

    Returns the flat solution vector of length d*(N+1).  Singular or
    numerically unusable factorizations raise LinearSolveError.
    """
    rhs = np.asarray(rhs, dtype=float).ravel()
    m = jac.shape[0]
    if rhs.shape != (m,):
        raise ValueError(f"rhs must have {m} entries, got {rhs.shape}")
    try:
        lu = splu(jac.to_sparse())
        x = lu.solve(rhs)
    except RuntimeError as exc:  # exactly singular factor
        raise LinearSolveError(f"sparse factorization failed: {exc}") from exc
    if not np.isfinite(x).all():
        raise LinearSolveError("linear solve produced non-finite entries")
    return x


def _mean_abs(step: np.ndarray) -> float:
    return float(np.abs(step).mean())


_MAX_BACKTRACKS = 12


def _damped_step(system, mesh, U, delta, base_norm, shrink):
    """Shrink the step geometrically until the residual norm stops growing."""
    t = 1.0
    for _ in range(_MAX_BACKTRACKS):
        try:
            trial = np.linalg.norm(residual(system, mesh, U + t * delta).ravel())
        except EvaluationError:
            t *= shrink
            continue
        if trial <= base_norm:
            break
        t *= shrink
    return t * delta


def newton_solve(
    system: BvpSystem, mesh: Mesh, guess: np.ndarray, config: NewtonConfig | None = None
) -> SolutionGrid:
    """Run Newton iteration on the scheme from the given state matrix.

    Stops when the mean absolute update falls to config.tol or below; the
    iteration count equals the number of linear solves performed.  Running
    out of iterations yields a result with converged=False.  Updates that
    grow a million-fold over the first one raise DivergenceError.
    """
    config = config or NewtonConfig()
    U = np.array(_check_state(system, mesh, guess), dtype=float)
    if not np.isfinite(U).all():
        raise ValueError("initial guess contains non-finite entries")

    initial_norm = None
    update_norm = np.inf
    for k in range(1, config.max_iter + 1):
        R = residual(system, mesh, U)
        J = jacobian(system, mesh, U)
        try:
            delta = solve_linear(J, -R.ravel()).reshape(U.shape)
        except LinearSolveError as exc:
            raise LinearSolveError(f"Newton iteration {k}: {exc}") from exc
        step = delta
        if config.damping < 1.0:
            step = _damped_step(system, mesh, U, delta, np.linalg.norm(R.ravel()), config.damping)
        U = U + step
        update_norm = _mean_abs(step)
        if initial_norm is None:
            initial_norm = update_norm
        if update_norm <= config.tol:
            U.setflags(write=False)
            return SolutionGrid(mesh=mesh, U=U, iterations=k, converged=True,
                                final_update_norm=update_norm)
        if update_norm > 1e6 * max(initial_norm, np.finfo(float).tiny):
            raise DivergenceError(
                f"mean update grew to {update_norm:.3g} from {initial_norm:.3g} at iteration {k}"
            )
    U.setflags(write=False)
    return SolutionGrid(mesh=mesh, U=U, iterations=config.max_iter, converged=False,
                        final_update_norm=update_norm)
