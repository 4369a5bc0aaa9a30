"""Experiment harness: config files, budget sweeps, rate fits,
invariant-suite reports, SVG plots, and the command line."""

from .config import ExperimentConfig, load_config
from .lemmas import verify_lemmas
from .plots import emit_plot
from .sweep import RateFit, fit_rate, read_table, sweep, write_table

__all__ = [
    "ExperimentConfig", "load_config", "sweep", "fit_rate", "RateFit",
    "read_table", "write_table", "verify_lemmas", "emit_plot",
]
