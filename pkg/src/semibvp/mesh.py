"""Quasi-uniform grids on [0, inf] generated from a uniform reference grid.

A grid map carries the uniform nodes xi_n = n/N of [0, 1] onto [0, inf].
The image of xi = 1 is the point at infinity; it is stored as a sentinel
and never enters any difference formula.  The derivative span of each
interval is built from its quarter points, which are images of reference
coordinates strictly below 1 and therefore always finite — in particular
on the terminal interval, whose right endpoint is the sentinel.  The
half-point state weights interpolate between the interval endpoints
wherever both are finite and fall back to the interior quarter points on
the terminal interval.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError

LOGARITHMIC = "log"
ALGEBRAIC = "alg"

_VARIANTS = (LOGARITHMIC, ALGEBRAIC)


@dataclass(frozen=True)
class GridMap:
    """Strictly increasing map of the reference coordinate xi in [0, 1].

    variant "log" evaluates x = -c * ln(1 - xi); variant "alg" evaluates
    x = c * xi / (1 - xi).  The control parameter c > 0 sets the stretching
    scale.  Both variants send 0 to 0 and 1 to +inf.
    """

    variant: str = LOGARITHMIC
    c: float = 2.0

    def __post_init__(self):
        if self.variant not in _VARIANTS:
            raise ConfigurationError(
                f"unknown grid map variant {self.variant!r}; expected one of {_VARIANTS}"
            )
        if not (np.isfinite(self.c) and self.c > 0.0):
            raise ConfigurationError(f"grid map parameter c must be finite and positive, got {self.c!r}")

    def at(self, xi):
        """Evaluate the map at reference coordinates in [0, 1].

        Accepts a scalar or an array; xi = 1 yields +inf.  Values outside
        [0, 1] raise ValueError.
        """
        arr = np.asarray(xi, dtype=float)
        if np.any(arr < 0.0) or np.any(arr > 1.0) or not np.all(~np.isnan(arr)):
            raise ValueError(f"reference coordinate must lie in [0, 1], got {xi!r}")
        with np.errstate(divide="ignore"):
            if self.variant == LOGARITHMIC:
                # log1p keeps full precision for xi near 1
                x = -self.c * np.log1p(-arr)
            else:
                x = self.c * arr / (1.0 - arr)
        if arr.ndim == 0:
            return float(x)
        return x

    def _at_ratio(self, num: np.ndarray, den: int) -> np.ndarray:
        """Evaluate at xi = num/den without forming 1 - xi explicitly.

        num holds exactly representable numerators (integers plus quarters),
        so den - num is exact and the endpoint cancellation of 1 - xi never
        occurs.  num == den maps to +inf.
        """
        rem = den - num
        with np.errstate(divide="ignore"):
            if self.variant == LOGARITHMIC:
                # 0.0 - (...) rather than -(...) so the origin is +0.0
                return 0.0 - self.c * np.log(rem / den)
            # divide the exact integers first: scaling num and rem by a
            # common factor then cannot change the quotient, so refined
            # meshes share their coarse nodes bitwise for every ratio
            return self.c * (num / rem)


@dataclass(frozen=True, eq=False)
class Mesh:
    """Grid nodes and scheme coefficients for N intervals on [0, inf].

    nodes has N+1 entries with nodes[0] == 0 and nodes[N] == +inf.  The
    arrays x14, x12, x34 hold the quarter, mid and three-quarter points of
    each interval; a, b, c are the scheme coefficients.  The derivative
    span

        a = 2 * (x34 - x14)

    equals the interval length up to a third-order correction and stays
    finite on every interval, including the terminal one.  b and c are the
    linear interpolation weights of the half point x12 (b applies to the
    right state U_{n+1}, c to the left state U_n).  On intervals with two
    finite endpoints they anchor at the endpoints,

        b = (x12 - x_n) / (x_{n+1} - x_n)
        c = (x_{n+1} - x12) / (x_{n+1} - x_n),

    while the terminal interval anchors at its interior quarter points,

        b = (x12 - x14) / (x34 - x14)
        c = (x34 - x12) / (x34 - x14),

    because its right endpoint is infinite.  Either way b + c = 1 up to
    round-off and both lie in (0, 1).  All arrays are read-only.
    """

    grid_map: GridMap
    N: int
    nodes: np.ndarray
    x14: np.ndarray
    x12: np.ndarray
    x34: np.ndarray
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    @property
    def xi(self) -> np.ndarray:
        """Reference coordinates n/N of the nodes."""
        return np.arange(self.N + 1) / self.N

    @property
    def finite_nodes(self) -> np.ndarray:
        """The nodes excluding the sentinel at infinity."""
        return self.nodes[:-1]


def _interval_coefficients(grid_map: GridMap, N: int):
    """Scheme coefficients (a, b, c) per interval from cancellation-free forms.

    Every quantity is a distance between two mapped points of the same
    interval; the closed forms below evaluate those distances directly
    (log1p for the logarithmic map, a rational expression for the algebraic
    one) instead of subtracting nearby coordinates, so the coefficients
    carry full precision even deep into the grid where x12 - x_n is tiny
    relative to x_n.  Index arithmetic runs on m = N - n, which is exact.
    """
    cpar = grid_map.c
    m = np.arange(N, 0, -1).astype(float)  # N - n for n = 0..N-1
    mf = m[:-1]                            # intervals with finite right endpoint
    if grid_map.variant == LOGARITHMIC:
        a = 2.0 * cpar * np.log1p(0.5 / (m - 0.75))          # 2*(x34 - x14)
        left = cpar * np.log1p(0.5 / (mf - 0.5))             # x12 - x_n
        right = cpar * np.log1p(0.5 / (mf - 1.0))            # x_{n+1} - x12
        left_t = cpar * np.log1p(0.5)                        # x12 - x14, last interval
        right_t = cpar * np.log1p(1.0)                       # x34 - x12, last interval
    else:
        a = cpar * N / ((m - 0.75) * (m - 0.25))
        left = 0.5 * cpar * N / ((mf - 0.5) * mf)
        right = 0.5 * cpar * N / ((mf - 1.0) * (mf - 0.5))
        left_t = cpar * N * (2.0 / 3.0)
        right_t = cpar * N * 2.0
    left = np.append(left, left_t)
    right = np.append(right, right_t)
    whole = left + right
    return a, left / whole, right / whole


def build_mesh(grid_map: GridMap, N: int) -> Mesh:
    """Build the mesh with N intervals induced by grid_map.

    Requires N >= 2.  The node at index N is the +inf sentinel; every other
    coordinate, including all quarter points, is finite.
    """
    if not isinstance(N, (int, np.integer)) or isinstance(N, bool):
        raise ConfigurationError(f"interval count N must be an integer, got {N!r}")
    if N < 2:
        raise ConfigurationError(f"interval count N must be at least 2, got {N}")
    N = int(N)

    nodes = grid_map._at_ratio(np.arange(N + 1, dtype=float), N)
    base = np.arange(N, dtype=float)
    x14 = grid_map._at_ratio(base + 0.25, N)
    x12 = grid_map._at_ratio(base + 0.5, N)
    x34 = grid_map._at_ratio(base + 0.75, N)

    a, b, c = _interval_coefficients(grid_map, N)

    # Guard the sentinel: only nodes[N] may be infinite, and nothing the
    # scheme touches may reach it.
    assert nodes[0] == 0.0 and np.isposinf(nodes[-1])
    assert np.all(np.isfinite(nodes[:-1]))
    assert np.all(np.isfinite(x14)) and np.all(np.isfinite(x12)) and np.all(np.isfinite(x34))
    assert np.all(np.diff(nodes[:-1]) > 0.0)
    assert np.all(a > 0.0)
    assert np.all((b > 0.0) & (b < 1.0)) and np.all((c > 0.0) & (c < 1.0))

    for arr in (nodes, x14, x12, x34, a, b, c):
        arr.setflags(write=False)
    return Mesh(grid_map=grid_map, N=N, nodes=nodes, x14=x14, x12=x12, x34=x34, a=a, b=b, c=c)


def refine(mesh: Mesh, r: int = 2) -> Mesh:
    """Return the mesh with r*N intervals under the same grid map.

    Every r-th node of the result coincides with a node of the input mesh
    (bitwise, since both are images of identical rational coordinates).
    """
    if not isinstance(r, (int, np.integer)) or isinstance(r, bool) or r < 2:
        raise ConfigurationError(f"refinement ratio must be an integer >= 2, got {r!r}")
    return build_mesh(mesh.grid_map, int(r) * mesh.N)
