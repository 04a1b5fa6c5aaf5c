import numpy as np
import pytest
from hypothesis import given, strategies as st

from mcirsa.access import RepetitionDistribution, build_access_matrix, soliton_pmf, users_per_cell
from mcirsa.errors import InvalidParameterError
from mcirsa.numerics import derive_stream

# 1/8 + sum_{d=2}^{8} 1/(d-1), evaluated by hand
SOLITON8_MEAN = 1 / 8 + sum(1 / k for k in range(1, 8))


def test_soliton_values():
    dist = soliton_pmf(8)
    assert dist.pmf[0] == pytest.approx(1 / 8)
    assert dist.pmf[1] == pytest.approx(1 / 2)
    assert dist.pmf[7] == pytest.approx(1 / 56)
    assert dist.mean() == pytest.approx(SOLITON8_MEAN)
    assert SOLITON8_MEAN == pytest.approx(2.7179, abs=1e-4)


@given(st.integers(1, 200))
def test_soliton_sums_to_one(d_max):
    assert abs(soliton_pmf(d_max).pmf.sum() - 1) <= 1e-12


def test_soliton_invalid():
    with pytest.raises(InvalidParameterError):
        soliton_pmf(0)
    with pytest.raises(InvalidParameterError):
        RepetitionDistribution(2, [0.5, 0.6])


def test_users_per_cell_rounding():
    assert users_per_cell(1.2, 50) == 60
    assert users_per_cell(0.01, 50) == 1  # 0.5 rounds up
    assert users_per_cell(2.6, 50) == 130


def test_full_repetition_column():
    dist = RepetitionDistribution(5, [0, 0, 0, 0, 1.0])
    G = build_access_matrix(derive_stream(0), 1, 3, 5, dist)
    assert np.all(G == 1)


def test_access_matrix_statistics():
    T = 50
    G = build_access_matrix(derive_stream(1, [0]), 1, 100_000, T, soliton_pmf(8))
    assert set(np.unique(G)) <= {0, 1}
    weights = G.sum(axis=0)
    assert weights.min() >= 1 and weights.max() <= 8
    assert weights.mean() == pytest.approx(SOLITON8_MEAN, rel=0.01)


def test_row_inclusion_probability():
    # per-row inclusion is E[d]/T; 1e6 columns put the 2% band at ~4.8 standard errors
    T = 50
    G = build_access_matrix(derive_stream(1, [1]), 1, 1_000_000, T, soliton_pmf(8))
    np.testing.assert_allclose(G.mean(axis=1), SOLITON8_MEAN / T, rtol=0.02)


def test_access_matrix_deterministic():
    s = derive_stream(4, [2])
    a = build_access_matrix(s, 3, 7, 20, soliton_pmf(8))
    b = build_access_matrix(s, 3, 7, 20, soliton_pmf(8))
    np.testing.assert_array_equal(a, b)
    with pytest.raises(InvalidParameterError):
        build_access_matrix(s, 1, 1, 4, soliton_pmf(8))
