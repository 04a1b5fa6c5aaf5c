"""Experiment configuration, Monte Carlo averaging, sweeps and CSV output."""

from __future__ import annotations

import dataclasses
import hashlib
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .access import build_access_matrix, soliton_pmf, users_per_cell
from .channel import draw_channels, pilot_noise
from .decoder import RunInputs, sic_decode
from .errors import InvalidParameterError
from .numerics import RngStream
from .pilots import assign_pilots, dft_codebook
from .topology import build_grid, make_deployment

log = logging.getLogger(__name__)

SWEEP_VARIABLES = ("L", "tau", "N", "snr_db")
CSV_HEADER = "sweep,value,cell,mean_throughput,stderr,runs,config_digest"

# substream purpose tags below the run path
_TOPOLOGY, _ACCESS, _PILOTS, _CHANNELS, _NOISE = range(5)


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0) / 1000.0


@dataclass(frozen=True)
class SimConfig:
    grid_side: int = 3
    cell_size_m: float = 250.0
    T: int = 50
    L: float | None = 1.0
    M: int | None = None
    N: int = 8
    tau: int | str = "M"
    gamma_th: float = 10.0
    d_max: int = 8
    sigma_h2: float = 1.0
    P_dBm: float = 10.0
    P_tau_dBm: float = 10.0
    snr_db: float = 10.0
    runs: int = 1000
    master_seed: int = 0
    combiner: str = "mmse"
    mode: str = "multi-cell"
    decode_order: str = "batch"

    @property
    def users(self) -> int:
        return self.M if self.M is not None else users_per_cell(self.L, self.T)

    @property
    def tau_value(self) -> int:
        return self.users if self.tau == "M" else int(self.tau)

    @property
    def grid(self) -> int:
        return 1 if self.mode == "single-cell" else self.grid_side

    @property
    def P(self) -> float:
        return dbm_to_watts(self.P_dBm)

    @property
    def P_tau(self) -> float:
        return dbm_to_watts(self.P_tau_dBm)

    @property
    def N0(self) -> float:
        return self.P * self.sigma_h2 / 10.0 ** (self.snr_db / 10.0)

    def validate(self) -> "SimConfig":
        def bad(msg):
            raise InvalidParameterError(msg)

        if self.M is None and self.L is None:
            bad("either L or M must be given")
        if self.M is not None and self.M < 1:
            bad("M must be >= 1")
        if self.M is None and users_per_cell(self.L, self.T) < 1:
            bad(f"load L={self.L} gives no users with T={self.T}")
        if self.T < 1 or self.N < 1:
            bad("T and N must be >= 1")
        if not (self.tau == "M" or (isinstance(self.tau, (int, np.integer)) and self.tau >= 1)):
            bad(f"tau must be a positive integer or 'M', got {self.tau!r}")
        if not 1 <= self.d_max <= self.T:
            bad("need 1 <= d_max <= T")
        if self.P_tau_dBm < self.P_dBm:
            bad("P_tau must be >= P")
        if not self.gamma_th > 0 or not self.sigma_h2 > 0 or not self.cell_size_m > 0:
            bad("gamma_th, sigma_h2 and cell_size_m must be positive")
        if self.runs < 1:
            bad("runs must be >= 1")
        if self.combiner not in ("mmse", "mrc"):
            bad(f"unknown combiner {self.combiner!r}")
        if self.mode not in ("multi-cell", "single-cell"):
            bad(f"unknown mode {self.mode!r}")
        if self.decode_order not in ("batch", "greedy"):
            bad(f"unknown decode_order {self.decode_order!r}")
        if self.grid % 2 == 0:
            bad("grid_side must be odd")
        return self

    def replace(self, **changes) -> "SimConfig":
        return dataclasses.replace(self, **changes)

    def with_sweep_value(self, variable: str, value) -> "SimConfig":
        if variable == "L":
            return self.replace(L=float(value), M=None)
        if variable == "tau":
            return self.replace(tau=value if value == "M" else int(value))
        if variable == "N":
            return self.replace(N=int(value))
        if variable == "snr_db":
            return self.replace(snr_db=float(value))
        raise InvalidParameterError(f"cannot sweep {variable!r}; choose from {SWEEP_VARIABLES}")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def digest(self) -> str:
        """Short hash of the canonical (key-sorted) JSON form."""
        text = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    @classmethod
    def from_dict(cls, data: dict) -> "SimConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise InvalidParameterError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def load(cls, path) -> "SimConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def build_run(config: SimConfig, stream: RngStream, bs=None) -> RunInputs:
    """Draw every random ingredient of one run; channels and noise only for ``bs``."""
    grid = build_grid(config.grid, config.cell_size_m)
    M = config.users
    dep = make_deployment(stream.child(_TOPOLOGY), grid, M, config.P, config.P_tau)
    G = build_access_matrix(stream.child(_ACCESS), grid.Q, M, config.T, soliton_pmf(config.d_max))
    book = dft_codebook(config.tau_value, config.P_tau)
    assignment = assign_pilots(stream.child(_PILOTS), grid.Q, M, book)
    pilots = assignment.vectors(dep.pilot_power)
    bs = range(grid.Q) if bs is None else list(bs)
    channels = draw_channels(stream.child(_CHANNELS), dep, G, config.N, config.sigma_h2, bs)
    noise = {(t, q): pilot_noise(stream.child(_NOISE, t, q), config.N, book.tau, config.N0)
             for q in bs for t in range(config.T)}
    return RunInputs(dep, G, pilots, channels, noise, config.N0, assignment.flat_index)


def run_once(config: SimConfig, stream: RngStream) -> float:
    """Center-cell throughput of one independent realization."""
    center = build_grid(config.grid, config.cell_size_m).center_cell_index
    inputs = build_run(config, stream, bs=[center])
    metrics, _ = sic_decode(inputs, config.gamma_th, config.combiner, config.decode_order,
                            cells=[center])
    return metrics.throughput[center]


def _run_chunk(args):
    config, path, indices = args
    return [run_once(config, RngStream(config.master_seed, path + (i,))) for i in indices]


def run_throughputs(config: SimConfig, path=(), workers: int = 1) -> np.ndarray:
    """Per-run center-cell throughputs in run order, for any worker count."""
    config.validate()
    path = tuple(path)
    if workers <= 1:
        return np.array(_run_chunk((config, path, range(config.runs))))
    chunks = [(config, path, list(c)) for c in np.array_split(np.arange(config.runs), workers * 4) if len(c)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_run_chunk, chunks))
    return np.array([x for part in parts for x in part])


@dataclass(frozen=True)
class PointResult:
    mean: float
    stderr: float
    runs: int
    samples: np.ndarray = field(repr=False)


def summarize(samples: np.ndarray) -> PointResult:
    n = len(samples)
    stderr = float(np.std(samples, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return PointResult(float(np.mean(samples)), stderr, n, samples)


def run_point(config: SimConfig, path=(), workers: int = 1) -> PointResult:
    """Average center-cell throughput over ``config.runs`` independent runs."""
    return summarize(run_throughputs(config, path, workers))


@dataclass
class SweepRow:
    sweep: str
    value: object
    cell: int
    mean_throughput: float
    stderr: float
    runs: int
    config_digest: str


@dataclass
class SweepResult:
    variable: str
    rows: list[SweepRow]

    def values(self):
        return [r.value for r in self.rows]

    def means(self) -> np.ndarray:
        return np.array([r.mean_throughput for r in self.rows])


def run_sweep(base: SimConfig, variable: str, values, workers: int = 1, path=()) -> SweepResult:
    """One :func:`run_point` per value, each on its own seed path."""
    values = list(values)
    if not values:
        raise InvalidParameterError("sweep needs at least one value")
    configs = [base.with_sweep_value(variable, v).validate() for v in values]
    rows = []
    for k, (v, cfg) in enumerate(zip(values, configs)):
        res = run_point(cfg, tuple(path) + (k,), workers)
        log.info("%s=%s: throughput %.4f +- %.4f", variable, v, res.mean, res.stderr)
        center = build_grid(cfg.grid, cfg.cell_size_m).center_cell_index
        rows.append(SweepRow(variable, v, center, res.mean, res.stderr, res.runs, cfg.digest()))
    return SweepResult(variable, rows)


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def csv_text(result: SweepResult) -> str:
    lines = [CSV_HEADER]
    for r in result.rows:
        lines.append(",".join([r.sweep, _fmt(r.value), str(r.cell), _fmt(r.mean_throughput),
                               _fmt(r.stderr), str(r.runs), r.config_digest]))
    return "\n".join(lines) + "\n"


PLOT_TEMPLATE = """\
# gnuplot script: throughput versus {var}
set datafile separator ","
set key off
set grid
set xlabel "{var}"
set ylabel "center-cell throughput"
set terminal pngcairo size 800,600
set output "{png}"
plot "{csv}" using 2:4:5 skip 1 with yerrorlines lw 2
"""


def emit_outputs(result: SweepResult, out_path) -> tuple[Path, Path]:
    """Write the CSV and a gnuplot script next to it; returns both paths."""
    if not result.rows:
        raise InvalidParameterError("nothing to write: empty sweep result")
    out = Path(out_path)
    script = out.with_suffix(".gp")
    try:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(csv_text(result))
        with open(script, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(PLOT_TEMPLATE.format(var=result.variable, csv=out.name,
                                          png=out.with_suffix(".png").name))
    except OSError as exc:
        raise OSError(f"cannot write outputs to {out}: {exc}") from exc
    return out, script
