"""
Joint MMSE channel estimation under pilot reuse
===============================================

Two cells share a 4-pilot DFT codebook, so every pilot is used once in each
cell. We estimate the channels of the eight users seen by one base station,
check the empirical error variance against the analytic one, and compare it
with the closed form that holds for orthogonal codebooks.
"""

import numpy as np

from mcirsa.estimation import error_variances, estimator_matrix, reuse_variance
from mcirsa.numerics import complex_gaussian
from mcirsa.pilots import dft_codebook

rng = np.random.default_rng(0)
tau, P_tau, N0, N = 4, 0.01, 1e-3, 8

# pilot index per user: cell 0 then cell 1, each a permutation of the codebook
idx = np.concatenate([rng.permutation(tau), rng.permutation(tau)])
# large-scale gains at the observing BS: strong in-cell users, weak neighbours
b = np.concatenate([np.ones(tau), rng.uniform(0.01, 0.2, tau)])
# path-loss inversion scales each pilot by 1/sqrt(beta_home); here beta_home = 1
P = dft_codebook(tau, P_tau).columns[:, idx]

C = estimator_matrix(P, b, N0)
delta = error_variances(P, C, b, N0)

# %%
# Monte Carlo check of the error variance
n = 5000
H = complex_gaussian(rng, n * N, len(b)).reshape(n, N, -1) * np.sqrt(b)
Y = H @ P.conj().T + complex_gaussian(rng, n * N, tau, N0).reshape(n, N, -1)
err = (Y @ C - H).reshape(-1, len(b))
print("analytic delta :", np.round(delta, 5))
print("empirical      :", np.round(np.mean(np.abs(err) ** 2, axis=0), 5))

# %%
# Orthogonal codebook: the closed form depends only on who shares a pilot
energy = np.sum(np.abs(P) ** 2, axis=0)
varsigma, delta_closed = reuse_variance(idx, energy, b, N0, tau)
print("closed form    :", np.round(delta_closed, 5))
print("max difference :", np.max(np.abs(delta_closed - delta)))
