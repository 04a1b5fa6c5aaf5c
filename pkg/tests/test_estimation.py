import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mcirsa.errors import InvalidParameterError
from mcirsa.estimation import (error_variances, estimator_matrix, mmse_estimate,
                               reuse_variance, stack_order)
from mcirsa.numerics import complex_gaussian, derive_stream
from conftest import sim_instance


def _draw(rng, n, N, b, P, N0):
    """n independent (H, Y) pairs for a fixed pilot / path-loss instance."""
    Mbar = len(b)
    H = complex_gaussian(rng, n * N, Mbar).reshape(n, N, Mbar) * np.sqrt(b)
    Y = H @ P.conj().T + complex_gaussian(rng, n * N, P.shape[0], N0).reshape(n, N, -1)
    return H, Y


def test_stack_order():
    users = np.array([1, 4, 5, 6, 9, 12])  # M = 3: cells 0,1,1,2,3,4
    undecoded = np.ones(15, dtype=bool)
    undecoded[4] = False
    order, n_in = stack_order(users, 1, 3, undecoded)
    assert n_in == 1
    np.testing.assert_array_equal(users[order], [5, 1, 6, 9, 12])


@settings(max_examples=60, deadline=None)
@given(tau=st.integers(1, 12), Mbar=st.integers(1, 16), seed=st.integers(0, 2**31))
def test_estimator_forms_agree(tau, Mbar, seed):
    r = np.random.default_rng(seed)
    P = r.standard_normal((tau, Mbar)) + 1j * r.standard_normal((tau, Mbar))
    b = r.uniform(0.01, 2.0, Mbar)
    N0 = r.uniform(0.01, 1.0)
    Cu = estimator_matrix(P, b, N0, "user")
    Cp = estimator_matrix(P, b, N0, "pilot")
    assert np.max(np.abs(Cu - Cp)) <= 1e-9 * np.max(np.abs(Cp))


def test_single_user_scalar_case():
    tau, Pt, beta, N0, N = 4, 2.0, 0.7, 0.5, 4
    P = np.sqrt(Pt) * np.ones((tau, 1))
    b = np.array([beta])
    varsigma = tau * Pt * beta**2 / (N0 + tau * Pt * beta)
    C = estimator_matrix(P, b, N0)
    delta = error_variances(P, C, b, N0)
    assert delta[0] == pytest.approx(beta * N0 / (N0 + tau * Pt * beta))
    assert delta[0] == pytest.approx(beta - varsigma)
    H, Y = _draw(derive_stream(1), 10_000, N, b, P, N0)
    H_hat = Y @ C
    assert np.mean(np.abs(H_hat) ** 2) == pytest.approx(varsigma, rel=0.03)
    assert np.mean(np.abs(H_hat - H) ** 2) == pytest.approx(delta[0], rel=0.03)


def test_noiseless_full_rank_recovers_channel(rng):
    P = rng.standard_normal((6, 4)) + 1j * rng.standard_normal((6, 4))
    H = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
    H_hat, _ = mmse_estimate(H @ P.conj().T, P, np.ones(4), 1e-9)
    assert np.max(np.abs(H_hat - H)) <= 1e-3


def test_shared_pilot_estimates_are_collinear(rng):
    phi = np.exp(2j * np.pi * rng.random(4))
    P = np.stack([phi, phi], axis=1)
    b = np.array([0.8, 0.2])
    H = rng.standard_normal((5, 2)) + 1j * rng.standard_normal((5, 2))
    H_hat, _ = mmse_estimate(H @ P.conj().T + 0.1 * rng.standard_normal((5, 4)), P, b, 0.3)
    ratio = H_hat[:, 0] / H_hat[:, 1]
    np.testing.assert_allclose(ratio, b[0] / b[1], rtol=1e-10)


def test_error_variance_limits(rng):
    P = rng.standard_normal((3, 5)) + 1j * rng.standard_normal((3, 5))
    b = rng.uniform(0.1, 1, 5)
    delta = error_variances(P, estimator_matrix(P, b, 1e12), b, 1e12)
    np.testing.assert_allclose(delta, b, rtol=1e-9)
    delta = error_variances(P, estimator_matrix(P, b, 0.1), b, 0.1)
    assert np.all(delta > 0) and np.all(delta <= b)


def test_error_variance_matches_posterior_diagonal(rng):
    # independent route: diagonal of B - B P^H (P B P^H + N0 I)^-1 P B
    P = rng.standard_normal((3, 6)) + 1j * rng.standard_normal((3, 6))
    b = rng.uniform(0.1, 1, 6)
    N0 = 0.2
    R = (P * b) @ P.conj().T + N0 * np.eye(3)
    post = np.diag(b) - (P * b).conj().T @ np.linalg.solve(R, P * b)
    delta = error_variances(P, estimator_matrix(P, b, N0), b, N0)
    np.testing.assert_allclose(delta, np.diag(post).real, rtol=1e-10)


def test_estimation_errors_empirical():
    _, _, _, block, _ = sim_instance(21, L=0.8, tau=2, grid_side=3)
    P, b, N0 = block.pilots, block.b, block.N0
    H, Y = _draw(derive_stream(22), 10_000, 2, b, P, N0)
    err = Y @ block.C - H
    emp = np.mean(np.abs(err) ** 2, axis=(0, 1))
    np.testing.assert_allclose(emp, block.delta, rtol=0.03)


def test_disjoint_classes_uncorrelated_estimates():
    tau, N0 = 3, 0.1
    F = np.exp(-2j * np.pi * np.outer(np.arange(tau), np.arange(tau)) / tau)
    P = F[:, [0, 0, 1, 2]]
    b = np.array([1.0, 0.5, 0.8, 0.3])
    n = 10_000
    _, Y = _draw(derive_stream(5), n, 1, b, P, N0)
    H_hat = (Y @ estimator_matrix(P, b, N0))[:, 0, :]
    for u, v in [(0, 2), (1, 3), (2, 3)]:
        prod = H_hat[:, u] * H_hat[:, v].conj()
        se = np.std(prod) / np.sqrt(n)
        assert abs(prod.mean()) <= 3 * se * np.sqrt(2)


def test_reuse_variance_closed_forms():
    tau, Pt, N0 = 8, 0.5, 0.01
    vs, d = reuse_variance([3], [tau * Pt], [2.0], N0)
    assert vs[0] == pytest.approx(tau * Pt * 4.0 / (N0 + tau * Pt * 2.0))
    assert d[0] == pytest.approx(2.0 - vs[0], abs=1e-12)
    vs, _ = reuse_variance([1, 1], [tau * Pt] * 2, [1.0, 1.0], 1e-12)
    np.testing.assert_allclose(vs, 0.5, rtol=1e-9)
    with pytest.raises(ValueError):
        reuse_variance([9], [1.0], [1.0], N0, tau=8)
    with pytest.raises(InvalidParameterError):
        reuse_variance([0], [1.0], [1.0], 0.0)


def test_reuse_variance_matches_general_path():
    for seed in range(5):
        inputs, _, _, block, _ = sim_instance(seed, L=1.0, tau=3)
        idx = inputs.pilot_index[block.users]
        energy = np.sum(np.abs(block.pilots) ** 2, axis=0)
        vs, d = reuse_variance(idx, energy, block.b, block.N0)
        np.testing.assert_allclose(vs, block.b - block.delta, rtol=1e-9)


def test_rejects_bad_inputs():
    with pytest.raises(InvalidParameterError):
        estimator_matrix(np.ones((2, 1)), np.ones(1), 0.0)
    with pytest.raises(ValueError):
        mmse_estimate(np.ones((2, 3)), np.ones((2, 1)), np.ones(1), 1.0)
