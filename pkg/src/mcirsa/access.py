"""IRSA repetition factors and the binary access pattern matrix."""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .errors import InvalidParameterError
from .numerics import _as_generator


@dataclass(frozen=True)
class RepetitionDistribution:
    d_max: int
    pmf: np.ndarray  # pmf[d - 1] = Pr(d), d = 1..d_max

    def __post_init__(self):
        pmf = np.asarray(self.pmf, dtype=float)
        if pmf.shape != (self.d_max,):
            raise InvalidParameterError("pmf length must equal d_max")
        if np.any(pmf < 0) or abs(pmf.sum() - 1.0) > 1e-12:
            raise InvalidParameterError("pmf must be non-negative and sum to 1")
        object.__setattr__(self, "pmf", pmf)

    @property
    def degrees(self) -> np.ndarray:
        return np.arange(1, self.d_max + 1)

    def mean(self) -> float:
        return float(np.dot(self.degrees, self.pmf))


def soliton_pmf(d_max: int) -> RepetitionDistribution:
    """Ideal soliton truncated at ``d_max``: Pr(1) = 1/d_max, Pr(d) = 1/(d(d-1))."""
    if d_max < 1:
        raise InvalidParameterError("d_max must be >= 1")
    d = np.arange(1, d_max + 1, dtype=float)
    pmf = np.empty(d_max)
    pmf[0] = 1.0 / d_max
    pmf[1:] = 1.0 / (d[1:] * (d[1:] - 1.0))
    return RepetitionDistribution(d_max, pmf)


def users_per_cell(load: float, T: int) -> int:
    """Nearest integer to ``load * T`` (halves round up)."""
    return int(math.floor(load * T + 0.5))


def build_access_matrix(stream, Q: int, M: int, T: int, dist: RepetitionDistribution) -> np.ndarray:
    """Sample the ``T x (Q*M)`` access matrix.

    Column ``j*M + i`` belongs to user ``i`` of cell ``j``. Each column draws
    its repetition factor from ``dist`` and then a uniform subset of that many
    distinct RBs.
    """
    if dist.d_max > T:
        raise InvalidParameterError("d_max must not exceed T")
    rng = _as_generator(stream)
    n = Q * M
    degrees = rng.choice(dist.degrees, size=n, p=dist.pmf)
    # the first d entries of a uniform random permutation form a uniform d-subset
    perms = np.argsort(rng.random((n, T)), axis=1)
    chosen = np.arange(T)[None, :] < degrees[:, None]
    G = np.zeros((T, n), dtype=np.uint8)
    cols = np.broadcast_to(np.arange(n)[:, None], (n, T))
    G[perms[chosen], cols[chosen]] = 1
    return G
