"""Experiment configuration.

A flat record of everything a sweep needs: which zoo function, which
oracle, which algorithm, the budget grid, trial count, and seeding.
Configs load from TOML files and every field can be overridden from
the command line, so a config file is a starting point rather than a
cage.  Validation is field by field so error messages name the
offending key.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import tomli

FUNCTION_IDS = ("f0", "f1", "hybrid")
ALGORITHMS = ("epochgd", "bz")
ORDERS = ("first", "zeroth")

#: CLI-facing oracle names mapped to the internal noise-model ids
ORACLE_MODELS = {"gaussian-clipped": "gaussian", "sphere-bounded": "sphere"}

DEFAULT_BUDGETS = tuple(2 ** k for k in range(10, 18))


def _fail(field, message, value):
    raise ValueError(f"config field '{field}': {message}, got {value!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated, immutable description of one experiment.

    `lam` is the growth constant handed to the algorithm.  For epochgd
    it defaults to the function's certified constant (any smaller value
    is also sound); for bz it is required, since the bisection problem
    is synthesized from (kappa, lam) rather than taken from the zoo.
    """

    function: str = "f0"
    kappa: float = 2.0
    d: int = 2
    a: float = 0.05
    sigma: float = 0.1
    order: str = "first"
    oracle: str = "gaussian-clipped"
    algorithm: str = "epochgd"
    budgets: tuple = DEFAULT_BUDGETS
    trials: int = 50
    base_seed: int = 0
    delta: float = 0.2
    lam: float | None = None
    csv_out: str | None = None
    plot_out: str | None = None

    def __post_init__(self):
        if self.function not in FUNCTION_IDS:
            _fail("function", f"must be one of {FUNCTION_IDS}", self.function)
        if self.algorithm not in ALGORITHMS:
            _fail("algorithm", f"must be one of {ALGORITHMS}", self.algorithm)
        if self.oracle not in ORACLE_MODELS:
            _fail("oracle", f"must be one of {tuple(ORACLE_MODELS)}",
                  self.oracle)
        if self.order not in ORDERS:
            _fail("order", f"must be one of {ORDERS}", self.order)
        if self.algorithm == "epochgd":
            if not self.kappa > 1:
                _fail("kappa", "epochgd needs kappa > 1", self.kappa)
            if self.order != "first":
                _fail("order", "epochgd consumes gradients (use 'first')",
                      self.order)
        elif not self.kappa >= 1:
            _fail("kappa", "must be >= 1", self.kappa)
        if self.d < 1:
            _fail("d", "must be >= 1", self.d)
        if self.algorithm == "bz":
            if self.d != 1:
                _fail("d", "bz is one-dimensional (set d = 1)", self.d)
            if self.lam is None:
                _fail("lam", "bz needs an explicit growth constant", None)
            if self.order != "first":
                _fail("order", "bz consumes gradient signs (use 'first')",
                      self.order)
        if self.function == "hybrid" and self.d != 1:
            _fail("d", "the hybrid function is one-dimensional", self.d)
        if self.function == "f1" and not self.a > 0:
            _fail("a", "f1 needs a positive minimizer offset", self.a)
        if self.sigma < 0:
            _fail("sigma", "must be >= 0", self.sigma)
        if not 0 < self.delta < 1:
            _fail("delta", "must lie in (0, 1)", self.delta)
        if self.lam is not None and not self.lam > 0:
            _fail("lam", "must be positive when set", self.lam)
        budgets = tuple(int(T) for T in self.budgets)
        if len(budgets) == 0:
            _fail("budgets", "must be non-empty", self.budgets)
        if any(T < 1 for T in budgets):
            _fail("budgets", "entries must be >= 1", self.budgets)
        if any(b >= c for b, c in zip(budgets, budgets[1:])):
            _fail("budgets", "must be strictly increasing", self.budgets)
        object.__setattr__(self, "budgets", budgets)
        if self.trials < 1:
            _fail("trials", "must be >= 1", self.trials)

    @property
    def noise_model(self):
        return ORACLE_MODELS[self.oracle]

    def replace(self, **changes):
        """Copy with the given fields changed (re-validates)."""
        return dataclasses.replace(self, **changes)


def load_config(path=None, **overrides):
    """Build a config from an optional TOML file plus overrides.

    Unknown keys in the file are an error (misspellings should not
    silently fall back to defaults).  Overrides with value None are
    ignored, so optional CLI flags can be passed through unchecked.
    """
    values = {}
    if path is not None:
        with open(path, "rb") as fh:
            raw = tomli.load(fh)
        known = {f.name for f in dataclasses.fields(ExperimentConfig)}
        unknown = sorted(set(raw) - known)
        if unknown:
            raise ValueError(f"unknown config keys in {path}: {unknown}")
        values.update(raw)
    values.update({k: v for k, v in overrides.items() if v is not None})
    if "budgets" in values and not isinstance(values["budgets"], tuple):
        values["budgets"] = tuple(values["budgets"])
    return ExperimentConfig(**values)
