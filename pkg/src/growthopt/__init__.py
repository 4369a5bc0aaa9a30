"""Stochastic convex optimization under local growth conditions.

The package has three layers:

* model: feasible sets (`geometry`), a zoo of convex test functions
  with certified growth and Lipschitz constants (`functions`), and
  budgeted stochastic oracles (`oracle`);
* algorithms: the epoch gradient scheme for kappa-growth functions
  (`epochgd`) and posterior-update bisection for one-dimensional
  problems (`bz`);
* analysis: analytic lower-bound calculations (`lowerbound`) and an
  experiment harness with sweeps, rate fits, property-suite reports,
  and plots (`harness`).
"""

from .bz import bz_run, bz_run_many, grid_size, sign_margin, step_weight
from .epochgd import EpochSchedule, RunResult, compute_constants, run, run_many
from .functions import (evaluate, make_f0, make_f1, make_function,
                        make_hybrid, subgrad)
from .geometry import (Ball, Box, Intersection, contains, default_domain,
                       project, project_epoch)
from .harness import (ExperimentConfig, RateFit, emit_plot, fit_rate,
                      load_config, read_table, sweep, verify_lemmas,
                      write_table)
from .lowerbound import (fano_bound, indistinguishability_experiment,
                         kl_first_order, kl_terms, kl_zeroth_order)
from .oracle import (BudgetExhausted, OracleResponse, StochasticOracle,
                     gaussian_mass_bounds, query)

__version__ = "0.1.0"

__all__ = [
    "Ball", "Box", "Intersection", "contains", "default_domain",
    "project", "project_epoch",
    "evaluate", "subgrad", "make_f0", "make_f1", "make_hybrid",
    "make_function",
    "StochasticOracle", "OracleResponse", "BudgetExhausted", "query",
    "gaussian_mass_bounds",
    "EpochSchedule", "RunResult", "compute_constants", "run", "run_many",
    "grid_size", "step_weight", "bz_run", "bz_run_many", "sign_margin",
    "kl_terms", "kl_first_order", "kl_zeroth_order", "fano_bound",
    "indistinguishability_experiment",
    "ExperimentConfig", "load_config", "sweep", "fit_rate", "RateFit",
    "read_table", "write_table", "verify_lemmas", "emit_plot",
    "__version__",
]
