"""Receive combining, per-user SINR and its large-array approximation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AlreadyDecodedError, NotTransmittingError
from .estimation import EstimateBlock
from .numerics import _as_generator, complex_gaussian, hermitian_solve


@dataclass(frozen=True)
class SinrBreakdown:
    gain: float
    noise: float
    inci: float
    est: float
    ici: float

    @property
    def sinr(self) -> float:
        return self.gain / (self.noise + self.inci + self.est + self.ici)


@dataclass(frozen=True)
class AsymptoticBreakdown:
    epsilon: float
    sig: float
    int_nc: float
    int_c: float
    noise: float

    @property
    def sinr_bar(self) -> float:
        return self.sig / (self.epsilon * (self.noise + self.int_nc) + self.int_c)


def estimation_error_power(block: EstimateBlock, power: np.ndarray) -> float:
    """Sum of ``p * delta`` over every stacked column (independent of the target)."""
    return float(np.dot(power, block.delta))


def mmse_combiner(block: EstimateBlock, power: np.ndarray, est_power: float | None = None,
                  form: str = "antenna") -> np.ndarray:
    """Multi-cell MMSE combining matrix ``((N0 + Est) I + H D H^H)^-1 H D``.

    ``form="user"`` evaluates the same matrix through the ``Mbar x Mbar``
    identity ``H D ((N0 + Est) I + H^H H D)^-1``.
    """
    power = np.asarray(power, dtype=float)
    if not np.all(np.isfinite(power)):
        raise ValueError("powers must be finite")
    if est_power is None:
        est_power = estimation_error_power(block, power)
    reg = block.N0 + est_power
    H = block.H_hat
    N, Mbar = H.shape
    HD = H * power[None, :]
    if form == "antenna":
        K = HD @ H.conj().T
        K[np.diag_indices(N)] += reg
        return hermitian_solve(K, HD)
    if form == "user":
        sp = np.sqrt(power)
        Hs = H * sp[None, :]
        K = Hs.conj().T @ Hs
        K[np.diag_indices(Mbar)] += reg
        return Hs @ (hermitian_solve(K, np.eye(Mbar)) * sp[None, :])
    raise ValueError(f"unknown form {form!r}")


def mrc_combiner(block: EstimateBlock) -> np.ndarray:
    return block.H_hat.copy()


def sinr_table(block: EstimateBlock, A: np.ndarray, power: np.ndarray) -> dict[str, np.ndarray]:
    """SINR components of every in-cell column at once.

    Column ``m`` of ``A`` (``m < block.n_in``) is the combiner of stacked user
    ``m``; extra columns are ignored.
    """
    n_in = block.n_in
    A = A[:, :n_in]
    norm2 = np.sum(np.abs(A) ** 2, axis=0)
    G = np.abs(block.H_hat.conj().T @ A) ** 2 * power[:, None]  # [i, m] = p_i |a_m^H h_i|^2
    own = G[np.arange(n_in), np.arange(n_in)]
    gain = own / norm2
    inci = (G[:n_in].sum(axis=0) - own) / norm2
    ici = G[n_in:].sum(axis=0) / norm2
    est = np.full(n_in, estimation_error_power(block, power))
    sinr = gain / (block.N0 + inci + est + ici)
    return {"gain": gain, "inci": inci, "est": est, "ici": ici, "sinr": sinr}


def sinr(block: EstimateBlock, target: int, a: np.ndarray, power: np.ndarray,
         decoded: np.ndarray | None = None) -> SinrBreakdown:
    """SINR breakdown of in-cell user ``target`` (global index) under combiner ``a``."""
    if decoded is not None and decoded[target]:
        raise AlreadyDecodedError(f"user {target} is already decoded")
    col = block.column_of(target)
    if col is None or col >= block.n_in:
        raise NotTransmittingError(f"user {target} is not an undecoded in-cell transmitter here")
    norm2 = float(np.vdot(a, a).real)
    proj = np.abs(block.H_hat.conj().T @ a) ** 2 * power / norm2
    in_cell = proj[: block.n_in]
    return SinrBreakdown(
        gain=float(proj[col]),
        noise=block.N0,
        inci=float(in_cell.sum() - proj[col]),
        est=estimation_error_power(block, power),
        ici=float(proj[block.n_in:].sum()),
    )


def expected_term_powers(block: EstimateBlock, col: int, a: np.ndarray, power: np.ndarray) -> np.ndarray:
    """Conditional powers of the five post-combining terms predicted by the SINR analysis.

    Order: useful signal, target estimation error, intra-cell interference,
    inter-cell interference, noise.
    """
    norm2 = float(np.vdot(a, a).real)
    proj = np.abs(block.H_hat.conj().T @ a) ** 2
    pd = power * block.delta * norm2
    n_in = block.n_in
    others_in = [i for i in range(n_in) if i != col]
    return np.array([
        power[col] * proj[col],
        pd[col],
        np.sum(power[others_in] * proj[others_in] + pd[others_in]),
        np.sum(power[n_in:] * proj[n_in:] + pd[n_in:]),
        block.N0 * norm2,
    ])


@dataclass(frozen=True)
class OracleResult:
    powers: np.ndarray  # empirical E|T_i|^2, i = 1..5
    stderr: np.ndarray
    total: float
    total_stderr: float


def _posterior_error_factor(block: EstimateBlock) -> np.ndarray:
    # direct Gaussian conditioning of one antenna row: B - B P^H R^-1 P B
    P, b = block.pilots, block.b
    R = (P * b) @ P.conj().T + block.N0 * np.eye(P.shape[0])
    PB = P * b
    cov = np.diag(b) - PB.conj().T @ np.linalg.solve(R, PB)
    cov = (cov + cov.conj().T) / 2
    w, V = np.linalg.eigh(cov)
    return V * np.sqrt(np.clip(w, 0.0, None))[None, :]


def post_combined_power_oracle(stream, block: EstimateBlock, a: np.ndarray, col: int,
                               power: np.ndarray, n_samples: int = 100_000,
                               chunk: int = 20_000) -> OracleResult:
    """Empirical power of each term of the combined data signal.

    True channels are sampled from their exact joint posterior given the
    pilot observation (mean ``H_hat``), data symbols are ``CN(0, p)`` and the
    data-phase noise is ``CN(0, N0)``. Each sample forms the five terms of
    ``a^H y`` for target column ``col`` and records their squared magnitudes.
    """
    if n_samples < 1000:
        raise ValueError("n_samples must be >= 1000")
    rng = _as_generator(stream)
    L = _posterior_error_factor(block)
    N, Mbar = block.H_hat.shape
    n_in = block.n_in
    ah_hat = a.conj() @ block.H_hat  # (Mbar,)
    others_in = np.array([i for i in range(n_in) if i != col], dtype=int)
    terms = []
    done = 0
    while done < n_samples:
        n = min(chunk, n_samples - done)
        z = complex_gaussian(rng, n * N, Mbar).reshape(n, N, Mbar)
        err = z @ L.conj().T  # rows ~ CN(0, cov), error = H_hat - H
        ah_err = np.einsum("r,srm->sm", a.conj(), err)
        ah_true = ah_hat[None, :] - ah_err
        x = complex_gaussian(rng, n, Mbar) * np.sqrt(power)[None, :]
        noise = complex_gaussian(rng, n, N, block.N0) @ a.conj()
        t = np.empty((n, 5), dtype=complex)
        t[:, 0] = x[:, col] * ah_hat[col]
        t[:, 1] = -x[:, col] * ah_err[:, col]
        t[:, 2] = np.sum(x[:, others_in] * ah_true[:, others_in], axis=1)
        t[:, 3] = np.sum(x[:, n_in:] * ah_true[:, n_in:], axis=1)
        t[:, 4] = noise
        terms.append(t)
        done += n
    t = np.concatenate(terms)
    p = np.abs(t) ** 2
    tot = np.abs(t.sum(axis=1)) ** 2
    root_n = np.sqrt(n_samples)
    return OracleResult(p.mean(axis=0), p.std(axis=0, ddof=1) / root_n,
                        float(tot.mean()), float(tot.std(ddof=1) / root_n))


def asymptotic_sinr_mrc(block: EstimateBlock, col: int, power: np.ndarray, N: int) -> AsymptoticBreakdown:
    """Deterministic-equivalent SINR of stacked in-cell column ``col`` under MRC.

    Only the correlation vectors, path losses, powers and error variances
    enter, so the result is a function of ``N`` alone for a fixed instance.
    """
    P, C, b = block.pilots, block.C, block.b
    c = C[:, col]
    w = np.abs(P.conj().T @ c) ** 2  # |p_n^H c_m|^2
    eps = block.N0 * float(np.vdot(c, c).real) + float(np.dot(w, b))
    others = np.ones(len(b), dtype=bool)
    others[col] = False
    pm = power[col]
    return AsymptoticBreakdown(
        epsilon=eps,
        sig=N * pm * eps**2,
        int_nc=pm * block.delta[col] + float(np.dot(power[others], b[others])),
        int_c=N * float(np.sum(w[others] * power[others] * b[others] ** 2)),
        noise=block.N0,
    )
