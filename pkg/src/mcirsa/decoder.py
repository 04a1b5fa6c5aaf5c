"""Iterative SINR-threshold decoding with successive interference cancellation."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelBlock, received_pilot
from .errors import InvalidParameterError
from .estimation import estimate_block, stack_order
from .receiver import mmse_combiner, mrc_combiner, sinr_table
from .topology import Deployment


@dataclass
class RunInputs:
    """Everything one Monte Carlo run feeds to the decoder."""

    deployment: Deployment
    G: np.ndarray  # (T, Q*M)
    pilots: np.ndarray  # (tau, Q*M) per-user pilot vectors
    channels: ChannelBlock
    noise: dict  # (t, q) -> (N, tau) pilot-phase noise
    N0: float
    pilot_index: np.ndarray | None = None  # (Q*M,) codebook index per user

    @property
    def T(self) -> int:
        return self.G.shape[0]


@dataclass
class DecoderState:
    """Decoding outcome of one cell.

    ``decoded_at[i]`` is the iteration (1-based) in which user ``i`` of the
    cell was decoded, or 0 if it never was.
    """

    cell: int
    decoded_at: np.ndarray
    iterations: int = 0
    history: list[int] = field(default_factory=list)  # newly decoded count per iteration

    @property
    def undecoded(self) -> np.ndarray:
        return np.flatnonzero(self.decoded_at == 0)

    @property
    def decoded_count(self) -> int:
        return int(np.count_nonzero(self.decoded_at))


@dataclass(frozen=True)
class RunMetrics:
    decoded: dict[int, int]
    throughput: dict[int, float]
    iterations: dict[int, int]


def throughput(decoded_count: int, T: int) -> float:
    return decoded_count / T


def rb_sinrs(inputs: RunInputs, q: int, t: int, undecoded: np.ndarray, combiner: str = "mmse",
             form: str = "auto"):
    """SINRs of the undecoded in-cell transmitters of RB ``t`` at BS ``q``.

    ``undecoded`` is a boolean mask over all global users. Returns the global
    indices of those users and their SINRs.
    """
    dep = inputs.deployment
    M = dep.M
    users_t = inputs.channels.users[t]
    order, n_in = stack_order(users_t, q, M, undecoded)
    if n_in == 0:
        return users_t[:0], np.zeros(0)
    cols = users_t[order]
    keep = np.ones(len(users_t), dtype=bool)
    keep[(users_t // M == q) & ~undecoded[users_t]] = False
    H = inputs.channels.H[t, q]
    Y = received_pilot(H, inputs.pilots[:, users_t], inputs.noise[t, q], keep)
    b = dep.beta.reshape(-1, dep.Q)[cols, q] * inputs.channels.sigma_h2
    block = estimate_block(Y, inputs.pilots[:, cols], b, inputs.N0, cols, n_in, form)
    power = dep.data_power.reshape(-1)[cols]
    if combiner == "mmse":
        A = mmse_combiner(block, power)
    elif combiner == "mrc":
        A = mrc_combiner(block)
    else:
        raise InvalidParameterError(f"unknown combiner {combiner!r}")
    return cols[:n_in], sinr_table(block, A, power)["sinr"]


def decode_cell(inputs: RunInputs, q: int, gamma_th: float, combiner: str = "mmse",
                order: str = "batch", form: str = "auto") -> DecoderState:
    """Run the estimate / SINR / cancel loop for the users of cell ``q``.

    In ``"batch"`` order every user whose SINR reaches ``gamma_th`` in at
    least one RB is decoded in the same iteration; ``"greedy"`` decodes only
    the single best user per iteration. Only RBs touched by a newly decoded
    user are re-evaluated, since all other RBs see identical inputs. The loop
    ends after the first iteration that decodes nobody.
    """
    if not gamma_th > 0:
        raise InvalidParameterError("gamma_th must be positive")
    if order not in ("batch", "greedy"):
        raise InvalidParameterError(f"unknown decode order {order!r}")
    dep = inputs.deployment
    M, T = dep.M, inputs.T
    undecoded = np.ones(dep.Q * M, dtype=bool)
    state = DecoderState(q, np.zeros(M, dtype=int))
    G_cell = inputs.G[:, q * M:(q + 1) * M].astype(bool)
    table = {}
    dirty = set(range(T))
    k = 0
    while True:
        k += 1
        for t in sorted(dirty):
            table[t] = rb_sinrs(inputs, q, t, undecoded, combiner, form)
        dirty.clear()
        best = np.full(M, -np.inf)
        for users, rho in table.values():
            if users.size:
                np.maximum.at(best, users - q * M, rho)
        winners = np.flatnonzero(best >= gamma_th)
        if order == "greedy" and winners.size:
            winners = winners[[np.argmax(best[winners])]]
        state.history.append(int(winners.size))
        if winners.size == 0:
            break
        state.decoded_at[winners] = k
        undecoded[q * M + winners] = False
        dirty.update(np.flatnonzero(G_cell[:, winners].any(axis=1)).tolist())
    state.iterations = k
    return state


def sic_decode(inputs: RunInputs, gamma_th: float, combiner: str = "mmse", order: str = "batch",
               cells=None, form: str = "auto"):
    """Decode the requested cells (all by default) independently.

    Returns ``(RunMetrics, {cell: DecoderState})``. Cells never share
    decoding results, so deciding a subset of cells gives the same outcome
    for those cells as decoding all of them.
    """
    cells = range(inputs.deployment.Q) if cells is None else cells
    states = {q: decode_cell(inputs, q, gamma_th, combiner, order, form) for q in cells}
    metrics = RunMetrics(
        decoded={q: s.decoded_count for q, s in states.items()},
        throughput={q: throughput(s.decoded_count, inputs.T) for q, s in states.items()},
        iterations={q: s.iterations for q, s in states.items()},
    )
    return metrics, states
