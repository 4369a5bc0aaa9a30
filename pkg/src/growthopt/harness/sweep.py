"""Budget sweeps and rate fitting.

A sweep runs `trials` independent solver runs at every budget T in the
config and emits one row per run.  Rows are keyed by a per-trial seed
derived from (base_seed, T, trial), and oracle noise is a pure function
of that seed and the query index, so the table is reproducible bit for
bit no matter how the trials are scheduled.  Here they run in lockstep
batches (one vectorized batch per budget); results are emitted in
(T, trial) order either way.

Rate fitting is ordinary least squares of ln(mean error) on ln T,
mean over trials.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from ..bz import bz_run_many, grid_size
from ..epochgd import EpochSchedule, run_many
from ..functions import _signed_power, make_function
from ..geometry import default_domain
from ..oracle import StochasticOracle

#: CSV schema, in order; every sweep row has exactly these keys
TABLE_COLUMNS = ("kappa", "d", "sigma", "T", "trial",
                 "f_error", "point_error", "queries_used", "seed")

_INT_COLUMNS = frozenset({"d", "T", "trial", "queries_used", "seed"})


def trial_seed(base_seed, T, trial):
    """64-bit seed for one (budget, trial) cell of the sweep grid."""
    ss = np.random.SeedSequence([int(base_seed), int(T), int(trial)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _zoo_function(config):
    params = {"kappa": config.kappa, "d": config.d, "a": config.a}
    return make_function(config.function, **params)


def _epochgd_rows(config, T):
    f = _zoo_function(config)
    domain = f.domain if config.function == "hybrid" else default_domain(f.d)
    lam = f.lambda_growth if config.lam is None else config.lam
    if lam > f.lambda_growth:
        raise ValueError(
            f"config field 'lam': must be <= the function's certified "
            f"growth constant {f.lambda_growth:.6g}, got {lam!r}")
    seeds = [trial_seed(config.base_seed, T, i) for i in range(config.trials)]
    oracles = [StochasticOracle(f, budget=T, seed=s, sigma=config.sigma,
                                order="first",
                                noise_model=config.noise_model)
               for s in seeds]
    schedule = EpochSchedule(kappa=f.kappa, lam=lam,
                             G=oracles[0].grad_bound, delta=config.delta, T=T)
    results = run_many(oracles, domain, schedule)
    return [{"kappa": f.kappa, "d": f.d, "sigma": config.sigma, "T": T,
             "trial": i, "f_error": r.f_error, "point_error": r.point_error,
             "queries_used": r.queries_used, "seed": seeds[i]}
            for i, r in enumerate(results)]


def _bz_rows(config, T):
    # the 1-D bisection benchmark is synthesized from (kappa, lam):
    # f(x) = lam*|x - x*|^kappa on [0,1], with x* drawn in the middle
    # third of a random grid cell so it never sits on a cell boundary
    kappa, lam, sigma = config.kappa, config.lam, config.sigma
    n = config.trials
    m = grid_size(kappa, lam, max(T, 2))
    seeds = [trial_seed(config.base_seed, T, i) for i in range(n)]
    x_stars = np.empty(n)
    noise = np.empty((n, T))
    for i, s in enumerate(seeds):
        rng = np.random.default_rng(s)
        cell = rng.integers(0, m)
        x_stars[i] = (cell + rng.uniform(1.0 / 3, 2.0 / 3)) / m
        noise[i] = (rng.random(T) if kappa == 1
                    else rng.standard_normal(T))

    step = {"next": 0}

    def grad_oracle(xs):
        col = noise[:, step["next"]]
        step["next"] += 1
        true_sign = np.sign(xs - x_stars)
        if kappa == 1:
            # bounded sign noise: correct with probability 1/2 + lam
            flip = col >= 0.5 + lam
            return np.where(flip, -true_sign, true_sign)
        return (kappa * lam * _signed_power(xs - x_stars, kappa - 1.0)
                + sigma * col)

    _, x_hats = bz_run_many(grad_oracle, kappa, lam, T, n, sigma=sigma, m=m)
    point_errors = np.abs(x_hats - x_stars)
    return [{"kappa": kappa, "d": 1, "sigma": sigma, "T": T, "trial": i,
             "f_error": lam * point_errors[i] ** kappa,
             "point_error": point_errors[i],
             "queries_used": T, "seed": seeds[i]}
            for i in range(n)]


def sweep(config):
    """Run the configured sweep; returns rows, writes CSV if asked."""
    rows = []
    runner = _bz_rows if config.algorithm == "bz" else _epochgd_rows
    for T in config.budgets:
        rows.extend(runner(config, T))
    if config.csv_out is not None:
        write_table(rows, config.csv_out)
    return rows


def write_table(rows, path):
    """Write sweep rows as CSV with the fixed column schema."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TABLE_COLUMNS)
        for row in rows:
            writer.writerow([row[col] for col in TABLE_COLUMNS])


def read_table(path):
    """Read a sweep CSV back into typed row dicts."""
    rows = []
    with open(path, newline="") as fh:
        for raw in csv.DictReader(fh):
            rows.append({k: (int(v) if k in _INT_COLUMNS else float(v))
                         for k, v in raw.items()})
    return rows


@dataclass(frozen=True, eq=False)
class RateFit:
    """Least-squares power-law fit of mean error against budget.

    points holds (ln T, ln mean-error) pairs, one per budget; the model
    is y = slope * x + intercept with residual_rms the root mean square
    of the fit residuals.
    """

    points: np.ndarray
    slope: float
    intercept: float
    residual_rms: float

    def __repr__(self):
        return (f"RateFit(slope={self.slope:.4f}, "
                f"intercept={self.intercept:.4f}, "
                f"residual_rms={self.residual_rms:.2e}, "
                f"n={len(self.points)})")


def mean_by_budget(rows, column):
    """Mean of `column` per distinct budget T, sorted by T."""
    sums, counts = {}, {}
    for row in rows:
        T = row["T"]
        sums[T] = sums.get(T, 0.0) + row[column]
        counts[T] = counts.get(T, 0) + 1
    Ts = sorted(sums)
    return np.array(Ts, dtype=float), np.array(
        [sums[T] / counts[T] for T in Ts])


def fit_rate(rows, column="f_error"):
    """Fit mean `column` ~ T^slope over the budgets in the table."""
    Ts, means = mean_by_budget(rows, column)
    if len(Ts) < 4:
        raise ValueError(
            f"rate fitting needs >= 4 distinct budgets, got {len(Ts)}")
    if np.any(means <= 0):
        raise ValueError(
            f"mean {column} must be positive to fit a rate (a zero mean "
            f"suggests a degenerate noiseless run)")
    x, y = np.log(Ts), np.log(means)
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    slope, intercept = float(coef[0]), float(coef[1])
    if not np.isfinite(slope):
        raise ValueError("rate fit produced a non-finite slope")
    residuals = y - (slope * x + intercept)
    return RateFit(points=np.column_stack([x, y]), slope=slope,
                   intercept=intercept,
                   residual_rms=float(np.sqrt(np.mean(residuals ** 2))))
