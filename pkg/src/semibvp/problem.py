"""Problem definitions: first-order systems with two-point boundary data.

A problem is du/dx = f(x, u) on x >= 0 together with d boundary relations
g(u(0), u(inf)) = 0.  Analytic Jacobians are optional; finite-difference
fallbacks are provided here and used wherever an analytic one is missing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .mesh import Mesh

_SQRT_EPS = math.sqrt(np.finfo(float).eps)


@dataclass(frozen=True)
class BvpSystem:
    """First-order system of dimension d with boundary function g.

    f(x, u) and g(u0, uinf) return length-d vectors.  jac_f(x, u) returns
    the d x d matrix df/du; jac_g(u0, uinf) returns the pair of d x d
    matrices (dg/du0, dg/duinf).  Either Jacobian may be None, in which
    case forward differences are used.
    """

    d: int
    f: Callable[[float, np.ndarray], np.ndarray]
    g: Callable[[np.ndarray, np.ndarray], np.ndarray]
    jac_f: Callable[[float, np.ndarray], np.ndarray] | None = None
    jac_g: Callable[[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]] | None = None


@dataclass(frozen=True)
class InitialGuess:
    """Starting profile for the Newton iteration.

    eval(x) returns the d-vector guess at a finite coordinate x >= 0.
    at_infinity supplies the state at the infinity node: either a fixed
    d-vector or a callable of the mesh (for guesses whose far-field value
    depends on where the last finite nodes sit).
    """

    eval: Callable[[float], np.ndarray]
    at_infinity: np.ndarray | Callable[[Mesh], np.ndarray]

    def on_mesh(self, mesh: Mesh) -> np.ndarray:
        """Materialize the guess as an (N+1, d) state matrix."""
        first = np.atleast_1d(np.asarray(self.eval(0.0), dtype=float))
        d = first.shape[0]
        U = np.empty((mesh.N + 1, d))
        U[0] = first
        for n in range(1, mesh.N):
            U[n] = self.eval(float(mesh.nodes[n]))
        tail = self.at_infinity(mesh) if callable(self.at_infinity) else self.at_infinity
        U[mesh.N] = np.asarray(tail, dtype=float)
        if not np.isfinite(U).all():
            raise ValueError("initial guess produced non-finite entries")
        return U


def fd_jacobian_f(system: BvpSystem, x: float, u: np.ndarray, eps: float | None = None) -> np.ndarray:
    """Forward-difference approximation of df/du at (x, u).

    Column j is (f(x, u + h e_j) - f(x, u)) / h.  With eps=None the step is
    sqrt(machine eps) * max(1, |u_j|) per column; an explicit eps is used
    verbatim for every column.
    """
    u = np.asarray(u, dtype=float)
    f0 = np.asarray(system.f(x, u), dtype=float)
    J = np.empty((system.d, system.d))
    for j in range(system.d):
        h = eps if eps is not None else _SQRT_EPS * max(1.0, abs(u[j]))
        up = u.copy()
        up[j] += h
        J[:, j] = (np.asarray(system.f(x, up), dtype=float) - f0) / h
    return J


def fd_jacobian_g(
    system: BvpSystem, u0: np.ndarray, uinf: np.ndarray, eps: float | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Forward-difference blocks (dg/du0, dg/duinf) at (u0, uinf)."""
    u0 = np.asarray(u0, dtype=float)
    uinf = np.asarray(uinf, dtype=float)
    g0 = np.asarray(system.g(u0, uinf), dtype=float)
    G0 = np.empty((system.d, system.d))
    GN = np.empty((system.d, system.d))
    for j in range(system.d):
        h0 = eps if eps is not None else _SQRT_EPS * max(1.0, abs(u0[j]))
        up = u0.copy()
        up[j] += h0
        G0[:, j] = (np.asarray(system.g(up, uinf), dtype=float) - g0) / h0
        hN = eps if eps is not None else _SQRT_EPS * max(1.0, abs(uinf[j]))
        vp = uinf.copy()
        vp[j] += hN
        GN[:, j] = (np.asarray(system.g(u0, vp), dtype=float) - g0) / hN
    return G0, GN


@dataclass(frozen=True)
class Diagnostic:
    """One problem raised by validate(): kind plus a human-readable message."""

    kind: str  # "dimension" | "non-finite" | "jacobian"
    message: str


_PROBE_XS = (0.0, 0.5, 2.0, 7.5)


def _jac_close(analytic: np.ndarray, approx: np.ndarray) -> bool:
    return np.allclose(analytic, approx, rtol=1e-4, atol=1e-6)


def validate(system: BvpSystem) -> list[Diagnostic]:
    """Probe a system definition and report inconsistencies.

    Checks that d >= 1, that f and g return finite d-vectors on a fixed set
    of probe states, and that any analytic Jacobian agrees with its
    finite-difference counterpart to a relative tolerance of 1e-4.  Returns
    an empty list for a well-formed system.
    """
    out: list[Diagnostic] = []
    if system.d < 1:
        return [Diagnostic("dimension", f"system dimension must be >= 1, got {system.d}")]

    rng = np.random.default_rng(0)
    states = rng.uniform(-2.0, 2.0, size=(4, system.d))

    def record(kind: str, message: str) -> None:
        # one diagnostic per kind keeps the report readable
        if not any(diag.kind == kind for diag in out):
            out.append(Diagnostic(kind, message))

    for x in _PROBE_XS:
        for u in states:
            fv = np.atleast_1d(np.asarray(system.f(x, u), dtype=float))
            if fv.shape != (system.d,):
                record("dimension", f"f returned shape {fv.shape} at x={x}, expected ({system.d},)")
                continue
            if not np.isfinite(fv).all():
                record("non-finite", f"f returned a non-finite entry at x={x}, u={u!r}")
            if system.jac_f is not None:
                ja = np.asarray(system.jac_f(x, u), dtype=float)
                if ja.shape != (system.d, system.d):
                    record("dimension", f"jac_f returned shape {ja.shape}, expected square of size {system.d}")
                elif not _jac_close(ja, fd_jacobian_f(system, x, u)):
                    record("jacobian", f"jac_f disagrees with finite differences at x={x}, u={u!r}")

    for u0, uinf in zip(states, states[::-1]):
        gv = np.atleast_1d(np.asarray(system.g(u0, uinf), dtype=float))
        if gv.shape != (system.d,):
            record("dimension", f"g returned shape {gv.shape}, expected ({system.d},)")
            continue
        if not np.isfinite(gv).all():
            record("non-finite", f"g returned a non-finite entry at u0={u0!r}, uinf={uinf!r}")
        if system.jac_g is not None:
            G0a, GNa = (np.asarray(m, dtype=float) for m in system.jac_g(u0, uinf))
            G0f, GNf = fd_jacobian_g(system, u0, uinf)
            if G0a.shape != (system.d, system.d) or GNa.shape != (system.d, system.d):
                record("dimension", "jac_g returned blocks of the wrong shape")
            elif not (_jac_close(G0a, G0f) and _jac_close(GNa, GNf)):
                record("jacobian", f"jac_g disagrees with finite differences at u0={u0!r}, uinf={uinf!r}")

    return out
