import numpy as np
import pytest

from mcirsa.estimation import estimate_block, stack_order
from mcirsa.harness import SimConfig, build_run
from mcirsa.numerics import RngStream

ACCEPTANCE = {}


def record(criterion: int, passed: bool, detail: str):
    ACCEPTANCE[criterion] = (passed, detail)
    print(f"criterion {criterion}: {'PASS' if passed else 'FAIL'} - {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if passed else 'FAIL'}  {detail}")


def sim_instance(seed, L=1.0, N=4, tau="M", grid_side=3, T=10, snr_db=10.0, min_in=1, q=None):
    """One (inputs, q, t, block, power) tuple taken from a real simulator drop.

    Picks the first RB with at least ``min_in`` in-cell transmitters at BS ``q``
    (center cell by default).
    """
    cfg = SimConfig(grid_side=grid_side, T=T, L=L, N=N, tau=tau, d_max=min(8, T),
                    snr_db=snr_db, runs=1).validate()
    for attempt in range(100):
        inputs = build_run(cfg, RngStream(seed, (attempt,)))
        dep = inputs.deployment
        qq = dep.center_cell_index if q is None else q
        M = dep.M
        undecoded = np.ones(dep.Q * M, dtype=bool)
        for t in range(cfg.T):
            users_t = inputs.channels.users[t]
            order, n_in = stack_order(users_t, qq, M, undecoded)
            if n_in < min_in:
                continue
            cols = users_t[order]
            Y = inputs.channels.H[t, qq] @ inputs.pilots[:, users_t].conj().T + inputs.noise[t, qq]
            b = dep.beta.reshape(-1, dep.Q)[cols, qq] * cfg.sigma_h2
            block = estimate_block(Y, inputs.pilots[:, cols], b, inputs.N0, cols, n_in)
            power = dep.data_power.reshape(-1)[cols]
            return inputs, qq, t, block, power
    raise RuntimeError("no RB with enough in-cell transmitters")


def random_hpd(rng, n, ridge=1.0):
    M = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    return M.conj().T @ M + ridge * np.eye(n)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
