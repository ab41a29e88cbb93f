"""Synthetic instances, solver comparisons, speedup sweeps and reports."""

from .bounds import SpeedupBound, expansion_tolerance, theoretical_speedup_bound
from .comparison import SOLVER_NAMES, run_comparison, run_solver
from .config_file import parse_config_text, read_config_file
from .generation import GenerationSpec, generate_instance, resolve_regularization
from .report import ExperimentReport, SolverSummary, SpeedupRow
from .speedup import SpeedupProxy, run_speedup_sweep, update_count_speedup

__all__ = [
    "ExperimentReport",
    "GenerationSpec",
    "SOLVER_NAMES",
    "SolverSummary",
    "SpeedupBound",
    "SpeedupProxy",
    "SpeedupRow",
    "expansion_tolerance",
    "generate_instance",
    "parse_config_text",
    "read_config_file",
    "resolve_regularization",
    "run_comparison",
    "run_solver",
    "run_speedup_sweep",
    "theoretical_speedup_bound",
    "update_count_speedup",
]
