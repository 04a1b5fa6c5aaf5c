"""Joint MMSE channel estimation under intra- and inter-cell pilot contamination."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError
from .numerics import hermitian_solve


@dataclass
class EstimateBlock:
    """Joint estimate of all users heard by one BS in one RB and iteration.

    Columns are stacked with the undecoded in-cell transmitters first (the
    first ``n_in`` columns) followed by every out-of-cell transmitter in
    cell order. ``b`` holds ``beta * sigma_h^2`` toward the estimating BS and
    ``C`` the correlation vectors with ``H_hat = Y @ C``.
    """

    H_hat: np.ndarray  # (N, Mbar)
    C: np.ndarray  # (tau, Mbar)
    delta: np.ndarray  # (Mbar,)
    pilots: np.ndarray  # (tau, Mbar)
    b: np.ndarray  # (Mbar,)
    users: np.ndarray  # (Mbar,) global user index j*M + i
    n_in: int
    N0: float

    @property
    def M_bar(self) -> int:
        return self.H_hat.shape[1]

    def column_of(self, user: int) -> int | None:
        hits = np.flatnonzero(self.users == user)
        return int(hits[0]) if hits.size else None


def stack_order(users_t: np.ndarray, q: int, M: int, undecoded: np.ndarray):
    """Order the RB's transmitters the way the joint estimator stacks them.

    ``users_t`` are the sorted global indices transmitting in the RB and
    ``undecoded`` is a boolean mask over all global users (only cell ``q``
    entries matter; out-of-cell users always interfere). Returns the
    positions into ``users_t`` and the number of in-cell columns.
    """
    cell = users_t // M
    in_cell = (cell == q) & undecoded[users_t]
    out_cell = cell != q
    order = np.concatenate([np.flatnonzero(in_cell), np.flatnonzero(out_cell)])
    return order, int(in_cell.sum())


def estimator_matrix(P: np.ndarray, b: np.ndarray, N0: float, form: str = "auto") -> np.ndarray:
    """The ``tau x Mbar`` matrix ``C = P B (P^H P B + N0 I)^-1``.

    ``form="user"`` inverts an ``Mbar x Mbar`` system and ``form="pilot"`` the
    equivalent ``tau x tau`` system ``(P B P^H + N0 I)^-1 P B``; ``"auto"``
    picks the smaller one.
    """
    if not N0 > 0:
        raise InvalidParameterError("N0 must be positive")
    tau, Mbar = P.shape
    if b.shape != (Mbar,):
        raise ValueError(f"b must have shape ({Mbar},), got {b.shape}")
    if Mbar == 0:
        return np.zeros((tau, 0), dtype=complex)
    if form == "auto":
        form = "user" if Mbar <= tau else "pilot"
    if form == "user":
        # symmetrized: P B (P^H P B + N0 I)^-1 = P B^1/2 (B^1/2 P^H P B^1/2 + N0 I)^-1 B^1/2
        sb = np.sqrt(b)
        Ps = P * sb[None, :]
        K = Ps.conj().T @ Ps
        K[np.diag_indices(Mbar)] += N0
        return Ps @ (hermitian_solve(K, np.eye(Mbar)) * sb[None, :])
    if form == "pilot":
        PB = P * b[None, :]
        R = PB @ P.conj().T
        R[np.diag_indices(tau)] += N0
        return hermitian_solve(R, PB)
    raise ValueError(f"unknown form {form!r}")


def mmse_estimate(Y: np.ndarray, P: np.ndarray, b: np.ndarray, N0: float, form: str = "auto"):
    """Joint MMSE estimate ``H_hat = Y C``; returns ``(H_hat, C)``."""
    if Y.shape[1] != P.shape[0]:
        raise ValueError(f"Y has {Y.shape[1]} pilot symbols but pilots have length {P.shape[0]}")
    C = estimator_matrix(P, b, N0, form)
    return Y @ C, C


def error_variances(P: np.ndarray, C: np.ndarray, b: np.ndarray, N0: float) -> np.ndarray:
    """Per-entry estimation error variance of every stacked column.

    For column ``u`` the estimate power is ``N0 |c_u|^2 + sum_n |p_n^H c_u|^2 b_n``
    over all stacked users; the error variance is ``b_u`` times the fraction
    of that power not explained by user ``u``'s own matched term.
    """
    if C.shape[1] == 0:
        return np.zeros(0)
    W = np.abs(P.conj().T @ C) ** 2  # W[n, u] = |p_n^H c_u|^2
    total = N0 * np.sum(np.abs(C) ** 2, axis=0) + b @ W
    own = np.diag(W) * b
    return b * (total - own) / total


def reuse_variance(pilot_index, pilot_energy, b, N0: float, tau: int | None = None):
    """Closed-form estimate and error variances for orthogonal-codebook pilots.

    Parameters
    ----------
    pilot_index : array of int
        Codebook index of each stacked user.
    pilot_energy : array
        Squared pilot norm ``tau * p^P`` of each stacked user.
    b : array
        ``beta * sigma_h^2`` of each stacked user toward the estimating BS.
    N0 : float
        Noise variance.
    tau : int, optional
        Codebook size; when given, indices are checked against it.

    Returns
    -------
    (varsigma, delta) : tuple of arrays
        Estimate variance and error variance (``delta = b - varsigma``).
    """
    idx = np.asarray(pilot_index)
    energy = np.asarray(pilot_energy, dtype=float)
    b = np.asarray(b, dtype=float)
    if not N0 > 0:
        raise InvalidParameterError("N0 must be positive")
    if tau is not None and idx.size and (idx.min() < 0 or idx.max() >= tau):
        raise ValueError("pilot index outside the codebook")
    if not np.issubdtype(idx.dtype, np.integer):
        raise ValueError("reuse_variance needs integer codebook indices")
    # received pilot energy per reuse class, the user's own term included
    class_energy = np.zeros(idx.max() + 1 if idx.size else 0)
    np.add.at(class_energy, idx, energy * b)
    varsigma = energy * b**2 / (N0 + class_energy[idx])
    return varsigma, b - varsigma


def estimate_block(Y, P, b, N0, users, n_in, form: str = "auto") -> EstimateBlock:
    H_hat, C = mmse_estimate(Y, P, b, N0, form)
    delta = error_variances(P, C, b, N0)
    return EstimateBlock(H_hat, C, delta, P, b, np.asarray(users), int(n_in), float(N0))
