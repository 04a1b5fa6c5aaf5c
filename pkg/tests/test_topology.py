import numpy as np
import pytest

from mcirsa.errors import InvalidParameterError
from mcirsa.numerics import derive_stream
from mcirsa.topology import apply_power_control, build_grid, drop_users, make_deployment, path_loss


def test_three_by_three_grid():
    g = build_grid(3, 250)
    assert g.Q == 9
    assert g.center_cell_index == 4
    np.testing.assert_allclose(g.bs_positions[4], [375.0, 375.0])  # midpoint of 750 m region
    assert np.linalg.norm(g.bs_positions[1] - g.bs_positions[0]) == 250.0
    assert np.linalg.norm(g.bs_positions[3] - g.bs_positions[0]) == 250.0


def test_single_cell_grid():
    g = build_grid(1, 250)
    assert g.Q == 1 and g.center_cell_index == 0
    np.testing.assert_allclose(g.bs_positions[0], [125.0, 125.0])


@pytest.mark.parametrize("side,size", [(2, 250), (0, 250), (3, 0)])
def test_grid_rejects_bad_parameters(side, size):
    with pytest.raises(InvalidParameterError):
        build_grid(side, size)


def test_drop_users_uniform_mean():
    g = build_grid(1, 250)
    pos = drop_users(derive_stream(5, [0]), g, 100_000)
    assert np.all(np.abs(pos[0].mean(axis=0) - g.bs_positions[0]) < 1.0)


def test_drop_users_inside_home_cell():
    g = build_grid(3, 250)
    pos = drop_users(derive_stream(5, [1]), g, 50)
    lo = g.lower_corners[:, None, :]
    assert np.all((pos >= lo) & (pos <= lo + 250))
    one = drop_users(derive_stream(5, [2]), g, 1)
    assert one.shape == (9, 1, 2)
    assert not np.allclose(drop_users(derive_stream(5, [3]), g, 4), drop_users(derive_stream(5, [4]), g, 4))


def test_path_loss_values():
    assert path_loss(10.0) == pytest.approx(1.0)
    assert 10 * np.log10(path_loss(100.0)) == pytest.approx(-37.6)
    assert path_loss(100.0) == pytest.approx(1.7378e-4, rel=1e-4)
    assert 10 * np.log10(path_loss(0.5)) == pytest.approx(37.6)
    with pytest.raises(InvalidParameterError):
        path_loss(0.0)


def test_path_loss_monotone():
    d = np.linspace(1, 2000, 500)
    assert np.all(np.diff(path_loss(d)) <= 0)


def test_power_control():
    p, pp = apply_power_control(np.array([1.0, 1e-4]), 0.01, 0.01)
    np.testing.assert_allclose(p, [0.01, 100.0])
    np.testing.assert_allclose(pp, p)
    with pytest.raises(InvalidParameterError):
        apply_power_control(1.0, 0.02, 0.01)


def test_deployment_invariants():
    g = build_grid(3, 250)
    dep = make_deployment(derive_stream(9, [0]), g, 20, 0.01, 0.02)
    assert np.all(dep.beta > 0)
    home = np.arange(9)
    bh = dep.beta[home, :, home]
    np.testing.assert_allclose(dep.data_power * bh, 0.01, rtol=1e-12)
    np.testing.assert_allclose(dep.pilot_power * bh, 0.02, rtol=1e-12)
