"""Evaluation metrics, synthetic sequences and experiment harnesses."""
from .harness import COST_GRID, TABLE_MODES, AblationRow, ablate, format_csv, format_table, run_mode, throughput
from .metrics import EvalReport, evaluate, frames_from_tracks
from .synth import Occlusion, SynthSpec, density_spec, generate, generate_sequence

__all__ = [
    "COST_GRID", "TABLE_MODES", "AblationRow", "ablate", "format_csv", "format_table", "run_mode",
    "throughput", "EvalReport", "evaluate", "frames_from_tracks", "Occlusion", "SynthSpec",
    "density_spec", "generate", "generate_sequence",
]
