"""DFT pilot codebook and pilot-to-user assignment."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError
from .numerics import _as_generator


@dataclass(frozen=True)
class PilotBook:
    tau: int
    P_tau: float
    columns: np.ndarray  # (tau, tau); column c is phi_c with squared norm tau * P_tau


@dataclass(frozen=True)
class PilotAssignment:
    """Codebook index per user, stored as an array of shape (Q, M)."""

    book: PilotBook
    index: np.ndarray

    @property
    def flat_index(self) -> np.ndarray:
        return self.index.reshape(-1)

    def reuse_set(self, j: int, i: int) -> list[tuple[int, int]]:
        """All ``(cell, user)`` pairs sharing the pilot of user ``i`` in cell ``j``."""
        cells, users = np.nonzero(self.index == self.index[j, i])
        return list(zip(cells.tolist(), users.tolist()))

    def vectors(self, pilot_power) -> np.ndarray:
        """Per-user pilot vectors, shape (tau, Q*M), with squared norm ``tau * pilot_power``."""
        pilot_power = np.asarray(pilot_power, dtype=float).reshape(-1)
        scale = np.sqrt(pilot_power / self.book.P_tau)
        return self.book.columns[:, self.flat_index] * scale[None, :]


def dft_codebook(tau: int, P_tau: float = 1.0) -> PilotBook:
    """Columns of the ``tau x tau`` DFT matrix scaled to norm ``sqrt(tau * P_tau)``."""
    if tau < 1:
        raise InvalidParameterError("tau must be >= 1")
    r = np.arange(tau)
    F = np.sqrt(P_tau) * np.exp(-2j * np.pi * np.outer(r, r) / tau)
    return PilotBook(int(tau), float(P_tau), F)


def assign_pilots(stream, Q: int, M: int, book: PilotBook, policy: str = "auto") -> PilotAssignment:
    """Draw a codebook index for every user.

    ``"auto"`` gives distinct pilots within each cell when ``tau >= M`` and
    i.i.d. uniform draws otherwise; ``"iid"`` always draws i.i.d. uniformly.
    """
    rng = _as_generator(stream)
    tau = book.tau
    if policy not in ("auto", "iid"):
        raise InvalidParameterError(f"unknown pilot policy {policy!r}")
    if policy == "auto" and tau >= M:
        index = np.stack([rng.permutation(tau)[:M] for _ in range(Q)])
    else:
        index = rng.integers(0, tau, size=(Q, M))
    return PilotAssignment(book, index)
