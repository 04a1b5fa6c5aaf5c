"""Seeded random substreams and the complex linear-algebra kernels."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import InvalidParameterError, SingularSystemError


@dataclass(frozen=True)
class RngStream:
    """A reproducible random stream addressed by ``(master_seed, path)``.

    Derivation uses :class:`numpy.random.SeedSequence` spawn keys, so any
    substream can be built directly from its path without touching sibling
    streams. Two streams with distinct paths share no state.
    """

    master_seed: int
    path: tuple[int, ...] = ()

    def child(self, *path: int) -> "RngStream":
        return RngStream(self.master_seed, self.path + tuple(int(p) for p in path))

    def generator(self) -> np.random.Generator:
        """Return a fresh generator positioned at the start of this stream."""
        seq = np.random.SeedSequence(entropy=self.master_seed, spawn_key=self.path)
        return np.random.Generator(np.random.PCG64(seq))

    def random_bytes(self, n: int) -> bytes:
        return self.generator().bytes(n)


def derive_stream(master_seed: int, path=()) -> RngStream:
    if master_seed < 0:
        raise InvalidParameterError("master_seed must be non-negative")
    return RngStream(int(master_seed), tuple(int(p) for p in path))


def _as_generator(stream) -> np.random.Generator:
    if isinstance(stream, RngStream):
        return stream.generator()
    return stream


def complex_gaussian(stream, rows: int, cols: int, variance: float = 1.0) -> np.ndarray:
    """Draw a ``rows x cols`` matrix of i.i.d. CN(0, variance) entries.

    ``stream`` is either an :class:`RngStream` (consumed from its start) or a
    live :class:`numpy.random.Generator`.
    """
    if not variance > 0:
        raise InvalidParameterError(f"variance must be positive, got {variance}")
    rng = _as_generator(stream)
    scale = np.sqrt(variance / 2.0)
    z = rng.standard_normal((rows, cols, 2))
    return scale * (z[..., 0] + 1j * z[..., 1])


def hermitian_solve(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Solve ``A X = B`` for Hermitian positive-definite ``A`` via Cholesky."""
    A = np.asarray(A)
    B = np.asarray(B)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"A must be square, got shape {A.shape}")
    if A.shape[0] != B.shape[0]:
        raise ValueError(f"row mismatch: A is {A.shape}, B is {B.shape}")
    try:
        factor = scipy.linalg.cho_factor(A, lower=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError("matrix is not positive definite") from exc
    return scipy.linalg.cho_solve(factor, B, check_finite=False)
