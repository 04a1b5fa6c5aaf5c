"""Block-fading Rayleigh channels and received pilot signals."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameterError
from .numerics import RngStream, complex_gaussian


@dataclass
class ChannelBlock:
    """Channels of the users that transmit in each RB, seen at selected BSs.

    ``users[t]`` lists (in increasing order) the global user indices
    ``j*M + i`` with ``g_tji = 1``; ``H[t, q]`` is the ``N x len(users[t])``
    matrix of their channels to BS ``q``. Users silent in an RB never enter
    any received signal, so their channels are not drawn.
    """

    N: int
    sigma_h2: float
    users: list[np.ndarray]
    H: dict[tuple[int, int], np.ndarray] = field(default_factory=dict)

    @property
    def T(self) -> int:
        return len(self.users)


def draw_channels(stream: RngStream, deployment, G: np.ndarray, N: int,
                  sigma_h2: float = 1.0, bs=None) -> ChannelBlock:
    """Draw ``h_tji^q ~ CN(0, beta_ji^q sigma_h^2 I_N)`` independently per RB and BS.

    Each ``(t, q)`` pair uses its own substream ``stream.child(t, q)``, so the
    channels seen by one BS do not depend on which other BSs are drawn.
    """
    if N < 1:
        raise InvalidParameterError("N must be >= 1")
    T = G.shape[0]
    if T < 1:
        raise InvalidParameterError("T must be >= 1")
    Q, M = deployment.Q, deployment.M
    beta = deployment.beta.reshape(Q * M, Q)
    users = [np.flatnonzero(G[t]) for t in range(T)]
    block = ChannelBlock(N, sigma_h2, users)
    for q in range(Q) if bs is None else bs:
        for t in range(T):
            u = users[t]
            z = complex_gaussian(stream.child(t, q), N, len(u), 1.0)
            block.H[t, q] = z * np.sqrt(beta[u, q] * sigma_h2)[None, :]
    return block


def pilot_noise(stream: RngStream, N: int, tau: int, N0: float) -> np.ndarray:
    """The ``N x tau`` pilot-phase noise of one (run, RB, BS), drawn once."""
    return complex_gaussian(stream, N, tau, N0)


def received_pilot(H: np.ndarray, pilots: np.ndarray, noise: np.ndarray, keep=None) -> np.ndarray:
    """Sum of ``h p^H`` over the kept columns plus noise.

    ``H`` is ``N x K`` and ``pilots`` is ``tau x K`` with matching columns;
    ``keep`` is an optional boolean mask over the K columns selecting the
    users still present (SIC-removed users are dropped).
    """
    if keep is not None:
        H = H[:, keep]
        pilots = pilots[:, keep]
    return H @ pilots.conj().T + noise
