"""Monte Carlo simulator of multi-cell IRSA random access over massive-MIMO uplinks."""

from .harness import SimConfig, run_point, run_sweep, emit_outputs

__all__ = ["SimConfig", "run_point", "run_sweep", "emit_outputs"]
__version__ = "0.1.0"
