"""The built-in boundary-layer model and its convenience driver."""

import numpy as np
import pytest

from semibvp import (
    ALGEBRAIC,
    GridMap,
    SolutionGrid,
    blasius_system,
    build_mesh,
    fd_jacobian_f,
    mhd_initial_guess,
    mhd_system,
    solve_mhd,
    validate,
    wall_shear,
)


def test_right_hand_side_values():
    sys_ = mhd_system(0.4)
    assert sys_.d == 3
    u = np.array([2.0, 0.0, 3.0])
    assert np.array_equal(sys_.f(1.0, u), np.array([0.0, 3.0, -6.4]))


def test_analytic_jacobian_is_exact():
    sys_ = mhd_system(0.4)
    u = np.array([2.0, 0.0, 3.0])
    expected = np.array([
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
        [-3.0, 0.4, -2.0],
    ])
    assert np.array_equal(sys_.jac_f(1.0, u), expected)
    fd = fd_jacobian_f(sys_, 1.0, u)
    assert np.allclose(fd, expected, atol=1e-6)


def test_boundary_conditions():
    sys_ = mhd_system(1.0)
    assert np.array_equal(
        sys_.g(np.array([0.0, 0.0, 5.0]), np.array([7.0, 1.0, 9.0])),
        np.zeros(3),
    )
    left = sys_.g(np.array([0.3, 0.2, 0.0]), np.array([0.0, 0.8, 0.0]))
    assert np.allclose(left, np.array([0.3, 0.2, -0.2]), rtol=1e-14, atol=0.0)
    G0, GN = sys_.jac_g(np.zeros(3), np.zeros(3))
    assert np.array_equal(G0, np.array([[1.0, 0, 0], [0, 1.0, 0], [0, 0, 0]]))
    assert np.array_equal(GN, np.array([[0, 0, 0], [0, 0, 0], [0, 1.0, 0]]))
    assert not G0.flags.writeable and not GN.flags.writeable


def test_model_passes_validation():
    assert validate(mhd_system(0.7)) == []


@pytest.mark.parametrize("beta", [float("nan"), float("inf"), float("-inf")])
def test_coupling_must_be_finite(beta):
    with pytest.raises(ValueError, match="finite"):
        mhd_system(beta)


def test_zero_coupling_special_case():
    sys_ = blasius_system()
    u = np.array([1.0, 2.0, 3.0])
    assert np.array_equal(sys_.f(0.0, u), np.array([2.0, 3.0, -3.0]))


def test_initial_guess_profile_and_tail():
    guess = mhd_initial_guess()
    assert np.allclose(guess.eval(2.0),
                       np.array([1.0, 1.0, 0.1353352832366127]),
                       rtol=1e-15, atol=0.0)
    mesh = build_mesh(GridMap(), 1000)
    U = guess.on_mesh(mesh)
    assert U.shape == (1001, 3)
    # far-field row extends the last finite slope across the end interval
    assert U[-1, 0] == pytest.approx(9.104979856318357, rel=1e-13)
    assert U[-1, 1] == 1.0 and U[-1, 2] == 0.0


def test_wall_shear_needs_three_components():
    mesh = build_mesh(GridMap(), 4)
    sol = SolutionGrid(mesh=mesh, U=np.zeros((5, 2)), iterations=1,
                       converged=True, final_update_norm=0.0)
    with pytest.raises(ValueError, match="3-component"):
        wall_shear(sol)


def test_reference_solution_with_coupling():
    sol = solve_mhd(1.2)
    assert sol.converged
    assert sol.iterations == 4
    assert abs(wall_shear(sol) - 1.1772266642454086) < 2e-12


def test_reference_solution_without_coupling():
    sol = solve_mhd(0.0)
    assert sol.converged
    assert abs(wall_shear(sol) - 0.469599827509363) < 2e-12


def test_driver_accepts_custom_grid():
    sol = solve_mhd(0.5, grid_map=GridMap(variant=ALGEBRAIC, c=4.0), N=200)
    assert sol.converged
    assert sol.mesh.grid_map.variant == ALGEBRAIC
    assert 0.5 < wall_shear(sol) < 1.1
