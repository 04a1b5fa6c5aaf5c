"""
MRC in the large-array regime
=============================

With pilot contamination the MRC SINR approaches a deterministic value as the
number of antennas grows, because the coherent interference grows with N just
like the signal. We fix a drop where the target shares its pilot with another
in-cell user and watch the gap between simulated and limiting SINR shrink.
"""

import numpy as np

from mcirsa.estimation import estimate_block, stack_order
from mcirsa.harness import SimConfig, build_run
from mcirsa.numerics import RngStream, complex_gaussian
from mcirsa.receiver import asymptotic_sinr_mrc, sinr

cfg = SimConfig(L=1.0, N=4, T=10, d_max=8, tau=2, runs=1).validate()
for seed in range(100):
    inputs = build_run(cfg, RngStream(seed))
    dep = inputs.deployment
    q, M = dep.center_cell_index, dep.M
    found = None
    for t in range(cfg.T):
        users_t = inputs.channels.users[t]
        order, n_in = stack_order(users_t, q, M, np.ones(dep.Q * M, dtype=bool))
        cols = users_t[order]
        if n_in >= 2 and np.any(inputs.pilot_index[cols[1:n_in]] == inputs.pilot_index[cols[0]]):
            found = t, cols, n_in
            break
    if found:
        break
t, cols, n_in = found
P = inputs.pilots[:, cols]
b = dep.beta.reshape(-1, dep.Q)[cols, q]
power = dep.data_power.reshape(-1)[cols]

# %%
rng = np.random.default_rng(3)
for N in (16, 64, 256, 1024):
    rho = []
    for _ in range(100):
        H = complex_gaussian(rng, N, len(b)) * np.sqrt(b)
        Y = H @ P.conj().T + complex_gaussian(rng, N, P.shape[0], inputs.N0)
        block = estimate_block(Y, P, b, inputs.N0, cols, n_in)
        rho.append(sinr(block, cols[0], block.H_hat[:, 0], power).sinr)
    bar = asymptotic_sinr_mrc(block, 0, power, N)
    print(f"N={N:5d}  median SINR {np.median(rho):8.4f}  limit {bar.sinr_bar:8.4f}  "
          f"median |ratio-1| {np.median(np.abs(np.array(rho) / bar.sinr_bar - 1)):.4f}")
