"""Warm-started mesh sequences and Richardson extrapolation."""

import math

import numpy as np
import pytest

from semibvp import (
    ConfigurationError,
    ContinuationError,
    GridMap,
    NewtonConfig,
    SolutionGrid,
    build_mesh,
    continuation_solve,
    extrapolate,
    interpolate_to_refined,
    mhd_initial_guess,
    mhd_system,
    observed_order,
    refine,
    wall_shear,
)


def linear_in_xi_solution(N=10):
    mesh = build_mesh(GridMap(), N)
    xi = mesh.xi
    U = np.column_stack([2.0 * xi + 1.0, -xi])
    return SolutionGrid(mesh=mesh, U=U, iterations=0, converged=True,
                        final_update_norm=0.0)


# -------------------------------------------------------------- interpolation

def test_interpolation_exact_for_reference_linear_states():
    coarse = linear_in_xi_solution()
    fine_mesh = refine(coarse.mesh, 2)
    Uf = interpolate_to_refined(coarse, fine_mesh)
    xi_f = fine_mesh.xi
    expected = np.column_stack([2.0 * xi_f + 1.0, -xi_f])
    assert Uf.shape == (fine_mesh.N + 1, 2)
    assert np.abs(Uf - expected).max() < 1e-14


def test_interpolation_keeps_shared_nodes_bitwise():
    coarse = linear_in_xi_solution()
    for r in (2, 3):
        fine_mesh = refine(coarse.mesh, r)
        Uf = interpolate_to_refined(coarse, fine_mesh)
        assert np.array_equal(Uf[::r], coarse.U)


def test_interpolation_rejects_unrelated_meshes():
    coarse = linear_in_xi_solution()
    with pytest.raises(ConfigurationError, match="grid maps differ"):
        interpolate_to_refined(coarse, build_mesh(GridMap(c=3.0), 20))
    with pytest.raises(ConfigurationError, match="proper multiple"):
        interpolate_to_refined(coarse, build_mesh(GridMap(), 15))
    with pytest.raises(ConfigurationError, match="proper multiple"):
        interpolate_to_refined(coarse, build_mesh(GridMap(), 10))


# --------------------------------------------------------------- continuation

def test_continuation_marches_through_doublings():
    sols = continuation_solve(mhd_system(1.0), GridMap(), 50, 2,
                              mhd_initial_guess())
    assert len(sols) == 3
    assert [s.mesh.N for s in sols] == [50, 100, 200]
    assert all(s.converged for s in sols)
    # values frozen from a converged run of this configuration
    assert abs(wall_shear(sols[1]) - 1.090081493720221) < 1e-10
    assert abs(wall_shear(sols[2]) - 1.0900690546930174) < 1e-10
    # warm starts must not cost more Newton steps than the cold level
    assert max(s.iterations for s in sols[1:]) <= sols[0].iterations


def test_continuation_reports_failing_level():
    with pytest.raises(ContinuationError) as err:
        continuation_solve(mhd_system(1.0), GridMap(), 50, 1,
                           mhd_initial_guess(), NewtonConfig(max_iter=1))
    assert err.value.level == 0
    assert err.value.update_norm > 0.0


def test_continuation_level_validation():
    with pytest.raises(ConfigurationError, match="non-negative"):
        continuation_solve(mhd_system(1.0), GridMap(), 50, -1,
                           mhd_initial_guess())
    sols = continuation_solve(mhd_system(1.0), GridMap(), 50, 0,
                              mhd_initial_guess())
    assert len(sols) == 1 and sols[0].mesh.N == 50


# -------------------------------------------------------------- extrapolation

def test_ladder_recovers_exact_geometric_limit():
    # values L + C/4^g collapse to L after one second-order sweep
    L, C = 0.3, 0.8
    ladder = extrapolate((L + C, L + C / 4.0, L + C / 16.0))
    assert ladder.raw == (L + C, L + C / 4.0, L + C / 16.0)
    for row in ladder.values[1:]:
        for entry in row[1:]:
            assert abs(entry - L) < 1e-14
    assert ladder.best == pytest.approx(L, abs=1e-14)


def test_ladder_matches_hand_computed_table():
    # hand ladder: t = v + (v - coarser) / (2^p - 1), p = 2 then 4
    raw = (1.090081494, 1.090069055, 1.090065945)
    ladder = extrapolate(raw)
    assert ladder.values[1][1] == pytest.approx(1.0900649086666667, rel=1e-12)
    assert ladder.values[2][1] == pytest.approx(1.0900649083333333, rel=1e-12)
    assert ladder.values[2][2] == pytest.approx(1.0900649083111111, rel=1e-12)
    assert ladder.best == ladder.values[2][2]


def test_ladder_orders_and_metadata():
    ladder = extrapolate((1.0, 0.9, 0.89), n_values=(100, 200, 400))
    assert ladder.orders == (2.0, 4.0)
    assert ladder.n_values == (100, 200, 400)
    # first-order update keeps the usual secant form: 2*v1 - v0
    first = extrapolate((1.0, 0.6), orders=(1.0,))
    assert first.best == pytest.approx(0.2, abs=1e-15)


@pytest.mark.parametrize("raw, kwargs, message", [
    ((), {}, "at least one"),
    ((1.0, 2.0, 3.0), {"orders": (2.0,)}, "orders"),
    ((1.0, 2.0), {"orders": (0.0,)}, "positive"),
    ((1.0, 2.0), {"orders": (-2.0,)}, "positive"),
    ((1.0, 2.0), {"n_values": (10,)}, "match raw"),
])
def test_ladder_input_validation(raw, kwargs, message):
    with pytest.raises(ValueError, match=message):
        extrapolate(raw, **kwargs)


def test_observed_order_detects_second_order():
    assert observed_order((1.0, 0.25, 0.0625)) == pytest.approx(2.0, abs=1e-15)


def test_observed_order_degenerate_inputs():
    assert math.isnan(observed_order((1.0, 0.5, 0.5)))
    assert math.isnan(observed_order((1.0, 0.5, 0.75)))
    with pytest.raises(ValueError, match="three"):
        observed_order((1.0, 0.5))
    with pytest.raises(ValueError, match="three"):
        observed_order((1.0, 0.5, 0.25, 0.125))
