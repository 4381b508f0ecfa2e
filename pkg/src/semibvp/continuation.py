"""Mesh-doubling continuation and Richardson extrapolation of outputs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigurationError, ContinuationError
from .mesh import GridMap, Mesh, build_mesh, refine
from .newton import NewtonConfig, SolutionGrid, newton_solve
from .problem import BvpSystem, InitialGuess


def interpolate_to_refined(coarse: SolutionGrid, fine_mesh: Mesh) -> np.ndarray:
    """Carry a coarse solution onto a nested finer mesh.

    The interpolation is linear in the reference coordinate, so fine node
    r*n copies coarse node n exactly and the infinity node copies the coarse
    infinity node.  fine_mesh must use the same grid map and an interval
    count that is an integer multiple of the coarse one.
    """
    cmesh = coarse.mesh
    if fine_mesh.grid_map != cmesh.grid_map:
        raise ConfigurationError("meshes are not nested: grid maps differ")
    if fine_mesh.N % cmesh.N != 0 or fine_mesh.N <= cmesh.N:
        raise ConfigurationError(
            f"meshes are not nested: {fine_mesh.N} is not a proper multiple of {cmesh.N}"
        )
    r = fine_mesh.N // cmesh.N
    idx = np.arange(fine_mesh.N + 1)
    k, rem = np.divmod(idx, r)
    t = rem / r
    k2 = np.minimum(k + 1, cmesh.N)  # only consulted where rem > 0
    Uc = coarse.U
    return (1.0 - t)[:, None] * Uc[k] + t[:, None] * Uc[k2]


def continuation_solve(
    system: BvpSystem,
    grid_map: GridMap,
    n0: int,
    levels: int,
    guess: InitialGuess,
    config: NewtonConfig | None = None,
) -> list[SolutionGrid]:
    """Solve on meshes N0, 2*N0, ..., 2^levels * N0 with warm starts.

    Level 0 starts from the supplied guess; each subsequent level starts
    from the interpolant of the previous solution.  Returns one solution
    per level.  A level that fails to converge raises ContinuationError.
    """
    if levels < 0:
        raise ConfigurationError(f"levels must be non-negative, got {levels}")
    config = config or NewtonConfig()
    mesh = build_mesh(grid_map, n0)
    state = guess.on_mesh(mesh)
    out: list[SolutionGrid] = []
    for level in range(levels + 1):
        sol = newton_solve(system, mesh, state, config)
        if not sol.converged:
            raise ContinuationError(
                f"level {level} (N={mesh.N}) stopped at mean update "
                f"{sol.final_update_norm:.3g} after {sol.iterations} iterations",
                level=level,
                update_norm=sol.final_update_norm,
            )
        out.append(sol)
        if level < levels:
            fine = refine(mesh, 2)
            state = interpolate_to_refined(sol, fine)
            mesh = fine
    return out


@dataclass(frozen=True)
class RichardsonLadder:
    """Triangular table of extrapolants from a mesh-doubling sequence.

    values[g][k] is the level-k extrapolant on grid g (defined for k <= g);
    column 0 holds the raw inputs.  orders[k] is the error order eliminated
    by level k -> k+1.
    """

    values: tuple[tuple[float, ...], ...]
    orders: tuple[float, ...]
    n_values: tuple[int, ...] | None = None

    @property
    def raw(self) -> tuple[float, ...]:
        return tuple(row[0] for row in self.values)

    @property
    def best(self) -> float:
        """The highest-level extrapolant on the finest grid."""
        return self.values[-1][-1]


def extrapolate(
    raw: Sequence[float],
    orders: Sequence[float] | None = None,
    n_values: Sequence[int] | None = None,
) -> RichardsonLadder:
    """Build the Richardson ladder for outputs from successive mesh doublings.

    Each level removes the leading error term of order orders[k]:

        T[g][k+1] = T[g][k] + (T[g][k] - T[g-1][k]) / (2**orders[k] - 1)

    With orders=None the defaults 2, 4, 6, ... are used, matching a scheme
    whose error expansion contains only even powers.
    """
    vals = [float(v) for v in raw]
    if not vals:
        raise ValueError("raw must contain at least one value")
    if orders is None:
        orders = tuple(2.0 * (k + 1) for k in range(len(vals) - 1))
    else:
        orders = tuple(float(p) for p in orders)
        if len(orders) < len(vals) - 1:
            raise ValueError(f"need {len(vals) - 1} orders, got {len(orders)}")
        if any(p <= 0 for p in orders):
            raise ValueError("extrapolation orders must be positive")
    if n_values is not None:
        n_values = tuple(int(n) for n in n_values)
        if len(n_values) != len(vals):
            raise ValueError("n_values must match raw in length")

    rows = [[vals[0]]]
    for g in range(1, len(vals)):
        row = [vals[g]]
        for k in range(g):
            row.append(row[k] + (row[k] - rows[g - 1][k]) / (2.0 ** orders[k] - 1.0))
        rows.append(row)
    return RichardsonLadder(values=tuple(tuple(r) for r in rows), orders=orders, n_values=n_values)


def observed_order(raw: Sequence[float]) -> float:
    """Estimate the convergence order from three successive doublings.

    Returns log2 of the ratio of successive differences.  Degenerate input
    (zero denominator or a non-positive ratio) yields NaN.
    """
    vals = [float(v) for v in raw]
    if len(vals) != 3:
        raise ValueError(f"need exactly three values, got {len(vals)}")
    d0 = vals[0] - vals[1]
    d1 = vals[1] - vals[2]
    if d1 == 0.0:
        return math.nan
    ratio = d0 / d1
    if ratio <= 0.0:
        return math.nan
    return math.log2(ratio)
