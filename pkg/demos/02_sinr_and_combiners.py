"""
Per-user SINR with multi-cell MMSE and MRC combining
====================================================

Draw one realization of a 3x3 network, pick a resource block of the center
cell, and break the SINR of its users into signal, noise, intra-cell,
estimation-error and inter-cell parts for both combiners.
"""

import numpy as np

from mcirsa.estimation import estimate_block, stack_order
from mcirsa.harness import SimConfig, build_run
from mcirsa.numerics import RngStream
from mcirsa.receiver import mmse_combiner, mrc_combiner, sinr

cfg = SimConfig(L=1.0, N=8, T=20, runs=1).validate()
inputs = build_run(cfg, RngStream(1))
dep = inputs.deployment
q, M = dep.center_cell_index, dep.M
undecoded = np.ones(dep.Q * M, dtype=bool)

# first RB with at least two center-cell transmitters
for t in range(cfg.T):
    users_t = inputs.channels.users[t]
    order, n_in = stack_order(users_t, q, M, undecoded)
    if n_in >= 2:
        break
cols = users_t[order]
Y = inputs.channels.H[t, q] @ inputs.pilots[:, users_t].conj().T + inputs.noise[t, q]
b = dep.beta.reshape(-1, dep.Q)[cols, q]
block = estimate_block(Y, inputs.pilots[:, cols], b, inputs.N0, cols, n_in)
power = dep.data_power.reshape(-1)[cols]
print(f"RB {t}: {n_in} in-cell and {block.M_bar - n_in} out-of-cell transmitters")

# %%
A_mmse, A_mrc = mmse_combiner(block, power), mrc_combiner(block)
print(f"{'user':>5} {'comb':>5} {'SINR':>9} {'gain':>9} {'noise':>9} {'InCI':>9} {'Est':>9} {'ICI':>9}")
for m in range(n_in):
    for name, A in (("mmse", A_mmse), ("mrc", A_mrc)):
        s = sinr(block, cols[m], A[:, m], power)
        print(f"{cols[m]:5d} {name:>5} {s.sinr:9.3f} {s.gain:9.2e} {s.noise:9.2e} "
              f"{s.inci:9.2e} {s.est:9.2e} {s.ici:9.2e}")
