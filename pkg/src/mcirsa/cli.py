"""Command-line front end: single sweeps and unattended full reproduction."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .errors import InvalidParameterError
from .harness import SWEEP_VARIABLES, SimConfig, emit_outputs, run_sweep

log = logging.getLogger("mcirsa")

_L_GRID = [round(x, 1) for x in np.arange(0.2, 5.01, 0.2)]

# (name, sweep variable, values, config overrides) for every published curve
FIGURES = {
    "fig2": [(f"fig2_{mode}_N{N}_g{g}", "L", _L_GRID,
              dict(N=N, tau="M", gamma_th=float(g), mode=mode))
             for mode, N, g in [("multi-cell", 32, 10), ("multi-cell", 16, 10), ("multi-cell", 8, 10),
                                ("multi-cell", 8, 6), ("single-cell", 8, 10), ("single-cell", 4, 10),
                                ("single-cell", 8, 6)]],
    "fig3": [(f"fig3_{mode}_L{L}", "tau", [2, 5, 10, 15, 20, 30, 40, 50, 60, 80, 100],
              dict(N=32, L=float(L), mode=mode))
             for mode in ("multi-cell", "single-cell") for L in (1, 2, 3, 4)],
    "fig4": [(f"fig4_snr{snr}_L{L}", "N", [4, 8, 16, 32, 64, 128],
              dict(L=float(L), tau="M", snr_db=float(snr)))
             for snr in (10, -5) for L in (1, 2, 3, 4)],
    "fig5": [(f"fig5_N{N}_L{L}", "snr_db", [-10, -5, 0, 5, 10, 15, 20, 25, 30],
              dict(N=N, L=float(L), tau="M"))
             for N in (16, 32, 64) for L in (3, 4)],
}


def _parse_value(text: str):
    text = text.strip()
    if text == "M":
        return text
    try:
        return int(text)
    except ValueError:
        return float(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mcirsa", description=__doc__)
    p.add_argument("--config", type=Path, help="JSON file with SimConfig fields")
    p.add_argument("--sweep", choices=SWEEP_VARIABLES, help="variable to sweep")
    p.add_argument("--values", help="comma-separated sweep values, e.g. 0.5,1,1.5")
    p.add_argument("--runs", type=int, help="Monte Carlo runs per point")
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--out", type=Path, help="CSV path (directory with --reproduce)")
    p.add_argument("--mode", choices=("multi-cell", "single-cell"))
    p.add_argument("--combiner", choices=("mmse", "mrc"))
    p.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    p.add_argument("--reproduce", choices=sorted(FIGURES) + ["all"],
                   help="run every curve of a figure with the base config")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress per point")
    return p


def load_config(args) -> SimConfig:
    cfg = SimConfig.load(args.config) if args.config else SimConfig()
    overrides = {"runs": args.runs, "master_seed": args.seed, "mode": args.mode,
                 "combiner": args.combiner}
    return cfg.replace(**{k: v for k, v in overrides.items() if v is not None})


def _reproduce(base: SimConfig, which: str, out_dir: Path, workers: int):
    out_dir.mkdir(parents=True, exist_ok=True)
    names = sorted(FIGURES) if which == "all" else [which]
    for fig in names:
        for k, (name, var, values, over) in enumerate(FIGURES[fig]):
            cfg = base.replace(**over).validate()
            log.info("%s: sweeping %s over %s", name, var, values)
            result = run_sweep(cfg, var, values, workers, path=(names.index(fig), k))
            emit_outputs(result, out_dir / f"{name}.csv")
            print(out_dir / f"{name}.csv")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(message)s")
    try:
        base = load_config(args)
        if args.workers < 1:
            raise InvalidParameterError("--workers must be >= 1")
        if args.out is None:
            raise InvalidParameterError("--out is required")
        if args.reproduce:
            _reproduce(base.validate(), args.reproduce, args.out, args.workers)
            return 0
        if not args.sweep or not args.values:
            raise InvalidParameterError("--sweep and --values are required (or use --reproduce)")
        values = [_parse_value(v) for v in args.values.split(",") if v.strip()]
        result = run_sweep(base, args.sweep, values, args.workers)
        csv, script = emit_outputs(result, args.out)
        print(csv)
        print(script)
        return 0
    except (InvalidParameterError, json.JSONDecodeError, TypeError) as exc:
        print(f"mcirsa: configuration error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"mcirsa: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
