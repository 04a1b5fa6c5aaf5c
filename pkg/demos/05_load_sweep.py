"""
A small throughput-versus-load sweep
====================================

Sweep the load at N=8 with a handful of runs per point, then write the CSV and
a gnuplot script. Bump ``runs`` (and use ``workers``) for publication curves.
"""

import tempfile
from pathlib import Path

from mcirsa import SimConfig, emit_outputs, run_sweep

base = SimConfig(N=8, runs=10, master_seed=5)
result = run_sweep(base, "L", [0.4, 0.8, 1.2, 1.6, 2.0])
for row in result.rows:
    print(f"L={row.value:.1f}: throughput {row.mean_throughput:.3f} +- {row.stderr:.3f}")

out = Path(tempfile.mkdtemp()) / "load_sweep.csv"
csv, script = emit_outputs(result, out)
print(csv.read_text())
print("render with: gnuplot", script)
