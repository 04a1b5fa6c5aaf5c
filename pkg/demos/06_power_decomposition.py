"""
Checking the SINR terms by sampling
===================================

The analytic SINR splits the combined signal into five uncorrelated parts.
Here we sample true channels from their posterior given the pilots, data
symbols and noise, and compare the empirical power of each part with the
analytic prediction.
"""

import numpy as np

from mcirsa.estimation import estimate_block, stack_order
from mcirsa.harness import SimConfig, build_run
from mcirsa.numerics import RngStream, derive_stream
from mcirsa.receiver import expected_term_powers, mmse_combiner, post_combined_power_oracle

cfg = SimConfig(L=1.5, N=4, T=10, d_max=8, tau=3, runs=1).validate()
inputs = build_run(cfg, RngStream(6))
dep = inputs.deployment
q, M = dep.center_cell_index, dep.M
users_t = inputs.channels.users[0]
order, n_in = stack_order(users_t, q, M, np.ones(dep.Q * M, dtype=bool))
cols = users_t[order]
Y = inputs.channels.H[0, q] @ inputs.pilots[:, users_t].conj().T + inputs.noise[0, q]
block = estimate_block(Y, inputs.pilots[:, cols], dep.beta.reshape(-1, dep.Q)[cols, q],
                       inputs.N0, cols, n_in)
power = dep.data_power.reshape(-1)[cols]
a = mmse_combiner(block, power)[:, 0]

res = post_combined_power_oracle(derive_stream(6), block, a, 0, power, 100_000)
expected = expected_term_powers(block, 0, a, power)
for name, e, p, s in zip(["signal", "own error", "intra-cell", "inter-cell", "noise"],
                         expected, res.powers, res.stderr):
    print(f"{name:>10}: analytic {e:.4e}  sampled {p:.4e}  ({(p - e) / s:+.2f} SE)")
