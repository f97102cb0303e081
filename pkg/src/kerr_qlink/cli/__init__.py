"""Command-line layer: scenario configuration, report/sweep assembly and the
built-in verification suites."""

from .main import main
from .report import Report, assemble_report, run_report, run_sweep
from .scenario import PRESETS, ScenarioConfig, SweepSpec, build_config, load_config
from .selfcheck import CHECKS, run_verify

__all__ = [
    "main",
    "Report",
    "assemble_report",
    "run_report",
    "run_sweep",
    "PRESETS",
    "ScenarioConfig",
    "SweepSpec",
    "build_config",
    "load_config",
    "CHECKS",
    "run_verify",
]
