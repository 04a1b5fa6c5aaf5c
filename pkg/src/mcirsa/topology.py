"""Square multi-cell geometry, user drops, path loss and power control."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError
from .numerics import _as_generator

MIN_DISTANCE_M = 1.0


@dataclass(frozen=True)
class Grid:
    grid_side: int
    cell_size_m: float
    bs_positions: np.ndarray  # (Q, 2)
    lower_corners: np.ndarray  # (Q, 2)
    center_cell_index: int

    @property
    def Q(self) -> int:
        return self.grid_side**2


@dataclass(frozen=True)
class Deployment:
    """Geometry and power tables of one Monte Carlo drop.

    ``beta[j, i, q]`` is the linear path loss from user ``i`` of cell ``j`` to
    BS ``q``. ``data_power`` and ``pilot_power`` are indexed ``[j, i]``.
    """

    grid: Grid
    user_positions: np.ndarray  # (Q, M, 2)
    beta: np.ndarray  # (Q, M, Q)
    data_power: np.ndarray  # (Q, M)
    pilot_power: np.ndarray  # (Q, M)

    @property
    def Q(self) -> int:
        return self.grid.Q

    @property
    def M(self) -> int:
        return self.user_positions.shape[1]

    @property
    def center_cell_index(self) -> int:
        return self.grid.center_cell_index


def build_grid(grid_side: int, cell_size_m: float) -> Grid:
    """Tile ``grid_side**2`` square cells in row-major order, BS at each center."""
    if grid_side < 1:
        raise InvalidParameterError("grid_side must be >= 1")
    if grid_side % 2 == 0:
        raise InvalidParameterError("grid_side must be odd so a unique center cell exists")
    if not cell_size_m > 0:
        raise InvalidParameterError("cell_size_m must be positive")
    rows, cols = np.divmod(np.arange(grid_side**2), grid_side)
    lower = np.stack([cols, rows], axis=1).astype(float) * cell_size_m
    centers = lower + cell_size_m / 2.0
    mid = grid_side // 2
    return Grid(grid_side, float(cell_size_m), centers, lower, mid * grid_side + mid)


def drop_users(stream, grid: Grid, M: int) -> np.ndarray:
    """Uniform i.i.d. positions, ``M`` per cell; returns an array of shape (Q, M, 2)."""
    if M < 1:
        raise InvalidParameterError("M must be >= 1")
    rng = _as_generator(stream)
    offsets = rng.random((grid.Q, M, 2)) * grid.cell_size_m
    return grid.lower_corners[:, None, :] + offsets


def path_loss(distance_m):
    """Linear path loss ``10 ** (-3.76 * log10(d / 10 m))`` with d clamped at 1 m."""
    d = np.asarray(distance_m, dtype=float)
    if np.any(d <= 0):
        raise InvalidParameterError("distance must be positive")
    d = np.maximum(d, MIN_DISTANCE_M)
    beta = 10.0 ** (-3.76 * np.log10(d / 10.0))
    return beta if beta.ndim else float(beta)


def apply_power_control(beta_home, P: float, P_tau: float):
    """Path-loss inversion toward the home BS; returns ``(data_power, pilot_power)``."""
    if not P > 0:
        raise InvalidParameterError("P must be positive")
    if P_tau < P:
        raise InvalidParameterError("P_tau must be >= P")
    beta_home = np.asarray(beta_home, dtype=float)
    return P / beta_home, P_tau / beta_home


def make_deployment(stream, grid: Grid, M: int, P: float, P_tau: float) -> Deployment:
    positions = drop_users(stream, grid, M)
    diff = positions[:, :, None, :] - grid.bs_positions[None, None, :, :]
    beta = path_loss(np.hypot(diff[..., 0], diff[..., 1]))
    home = np.arange(grid.Q)
    beta_home = beta[home, :, home]  # (Q, M)
    data_power, pilot_power = apply_power_control(beta_home, P, P_tau)
    return Deployment(grid, positions, beta, data_power, pilot_power)
