"""Command-line front end.

Subcommands mirror the library surface: `rate-sweep` runs a budget
sweep and fits rates, `run-epochgd` / `run-bz` execute one trial and
print the row, `kl-sweep` tabulates the divergence terms against the
offset, `verify-lemmas` runs the invariant suites into a JSON report,
and `plot` renders an existing sweep CSV.  Every config field has a
flag, so a TOML file is optional.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from ..lowerbound import kl_first_order, kl_zeroth_order
from .config import ALGORITHMS, FUNCTION_IDS, ORACLE_MODELS, ORDERS, \
    load_config
from .lemmas import verify_lemmas
from .plots import emit_plot
from .sweep import fit_rate, read_table, sweep, write_table


def _parse_budgets(text):
    try:
        budgets = tuple(int(part) for part in text.split(",") if part)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"budgets must be a comma list of integers, got {text!r}")
    return budgets


def _common_flags(parser):
    parser.add_argument("--config", help="TOML config file")
    parser.add_argument("--function", choices=FUNCTION_IDS)
    parser.add_argument("--kappa", type=float, help="growth exponent")
    parser.add_argument("--dim", type=int, help="dimension d")
    parser.add_argument("--a", type=float, help="f1 minimizer offset")
    parser.add_argument("--sigma", type=float, help="oracle noise level")
    parser.add_argument("--order", choices=ORDERS)
    parser.add_argument("--oracle", choices=tuple(ORACLE_MODELS))
    parser.add_argument("--algorithm", choices=ALGORITHMS)
    parser.add_argument("--budgets", type=_parse_budgets,
                        help="comma list of query budgets T")
    parser.add_argument("--trials", type=int, help="trials per budget")
    parser.add_argument("--seed", type=int, help="base seed")
    parser.add_argument("--delta", type=float, help="epochgd confidence")
    parser.add_argument("--lam", type=float, help="growth constant override")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--csv-out", help="explicit CSV path")
    parser.add_argument("--plot-out", help="explicit SVG path")


def _build_config(args, **forced):
    overrides = {
        "function": args.function, "kappa": args.kappa, "d": args.dim,
        "a": args.a, "sigma": args.sigma, "order": args.order,
        "oracle": args.oracle, "algorithm": args.algorithm,
        "budgets": args.budgets, "trials": args.trials,
        "base_seed": args.seed, "delta": args.delta, "lam": args.lam,
        "csv_out": args.csv_out, "plot_out": args.plot_out,
    }
    overrides.update(forced)
    return load_config(args.config, **overrides)


def _out_path(args, config_value, default_name):
    if config_value is not None:
        return config_value
    if args.out is None:
        return None
    os.makedirs(args.out, exist_ok=True)
    return os.path.join(args.out, default_name)


def _theory_slopes(kappa):
    if kappa <= 1:
        return None, None
    return -kappa / (2 * kappa - 2), -1.0 / (2 * kappa - 2)


def _cmd_rate_sweep(args):
    config = _build_config(args)
    csv_path = _out_path(args, config.csv_out, "rate_sweep.csv")
    plot_path = _out_path(args, config.plot_out, "rate_fit.svg")
    config = config.replace(csv_out=csv_path, plot_out=plot_path)
    rows = sweep(config)
    print(f"rows: {len(rows)} ({len(config.budgets)} budgets x "
          f"{config.trials} trials)")
    if csv_path:
        print(f"csv: {csv_path}")
    f_theory, p_theory = _theory_slopes(config.kappa)
    fits = {}
    for column, theory in (("f_error", f_theory), ("point_error", p_theory)):
        try:
            fit = fit_rate(rows, column)
        except ValueError as exc:
            print(f"{column}: no fit ({exc})")
            continue
        fits[column] = fit
        label = "n/a" if theory is None else f"{theory:.3f}"
        print(f"{column}: slope {fit.slope:.3f} (theory {label}, "
              f"residual rms {fit.residual_rms:.3f})")
    if plot_path:
        column = "point_error" if config.algorithm == "bz" else "f_error"
        theory = p_theory if config.algorithm == "bz" else f_theory
        if column in fits:
            emit_plot(fits[column], plot_path, theory=theory, column=column)
            print(f"plot: {plot_path}")
    return 0


def _cmd_single_run(args, algorithm):
    forced = {"algorithm": algorithm, "budgets": (args.budget,), "trials": 1}
    if algorithm == "bz":
        forced["d"] = 1
    config = _build_config(args, **forced)
    row = sweep(config)[0]
    for key, value in row.items():
        print(f"{key}: {value}")
    return 0


def _cmd_kl_sweep(args):
    config = _build_config(args)
    offsets = args.a_grid
    T = args.budget
    sigma = config.sigma if config.sigma > 0 else 1.0
    rows = []
    print(f"kappa={config.kappa} d={config.d} sigma={sigma} T={T}")
    print("a,kl_first_order,kl_zeroth_order")
    for a in offsets:
        first = kl_first_order(config.kappa, config.d, a, sigma, T)
        zeroth = kl_zeroth_order(config.kappa, config.d, a, sigma, T)
        rows.append((a, first, zeroth))
        print(f"{a},{first},{zeroth}")
    x = np.log([r[0] for r in rows])
    for idx, name, theory in ((1, "first-order", 2 * config.kappa - 2),
                              (2, "zeroth-order", 2 * config.kappa)):
        y = np.log([r[idx] for r in rows])
        slope = np.polyfit(x, y, 1)[0]
        print(f"{name} slope vs a: {slope:.4f} (theory {theory:.1f})")
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        path = os.path.join(args.out, "kl_sweep.csv")
        with open(path, "w", newline="") as fh:
            fh.write("a,kl_first_order,kl_zeroth_order\n")
            for a, first, zeroth in rows:
                fh.write(f"{a},{first},{zeroth}\n")
        print(f"csv: {path}")
    return 0


def _cmd_verify_lemmas(args):
    report = verify_lemmas(seed=args.seed or 0, samples=args.samples,
                           geometry_samples=args.geometry_samples)
    for name, suite in report["suites"].items():
        status = "PASS" if suite["passed"] else "FAIL"
        print(f"{status} {name}: {suite['violations']} violations in "
              f"{suite['samples']} samples "
              f"(worst slack {suite['worst_slack']:.3e})")
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        path = os.path.join(args.out, "lemma_report.json")
        with open(path, "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True, default=float)
            fh.write("\n")
        print(f"report: {path}")
    print("all suites passed" if report["all_passed"]
          else "SUITE FAILURES PRESENT")
    return 0 if report["all_passed"] else 1


def _cmd_plot(args):
    rows = read_table(args.csv)
    path = args.plot_out
    if path is None:
        stem = os.path.splitext(os.path.basename(args.csv))[0]
        out_dir = args.out or os.path.dirname(args.csv) or "."
        os.makedirs(out_dir, exist_ok=True)
        path = os.path.join(out_dir, f"{stem}_{args.column}.svg")
    emit_plot(rows, path, theory=args.theory, column=args.column)
    print(f"plot: {path}")
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="growthopt",
        description="Budget sweeps, rate fits, and invariant suites for "
                    "stochastic convex optimization under growth conditions.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rate-sweep",
                       help="run a budget sweep and fit error rates")
    _common_flags(p)
    p.set_defaults(func=_cmd_rate_sweep)

    p = sub.add_parser("run-epochgd", help="one epoch-gradient trial")
    _common_flags(p)
    p.add_argument("--budget", type=int, default=4096, help="query budget T")
    p.set_defaults(func=lambda a: _cmd_single_run(a, "epochgd"))

    p = sub.add_parser("run-bz", help="one posterior-bisection trial")
    _common_flags(p)
    p.add_argument("--budget", type=int, default=1024, help="query budget T")
    p.set_defaults(func=lambda a: _cmd_single_run(a, "bz"))

    p = sub.add_parser("kl-sweep",
                       help="tabulate divergence terms against the offset a")
    _common_flags(p)
    p.add_argument("--budget", type=int, default=1000,
                   help="oracle calls T in the divergence")
    p.add_argument("--a-grid", type=lambda s: tuple(
        float(v) for v in s.split(",") if v),
        default=(0.001, 0.002, 0.004, 0.008, 0.016, 0.032),
        help="comma list of offsets")
    p.set_defaults(func=_cmd_kl_sweep)

    p = sub.add_parser("verify-lemmas", help="run the invariant suites")
    _common_flags(p)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--geometry-samples", type=int, default=2_000)
    p.set_defaults(func=_cmd_verify_lemmas)

    p = sub.add_parser("plot", help="render a sweep CSV as an SVG rate plot")
    _common_flags(p)
    p.add_argument("csv", help="sweep CSV path")
    p.add_argument("--column", default="f_error",
                   choices=("f_error", "point_error"))
    p.add_argument("--theory", type=float,
                   help="reference slope (defaults to the fitted slope)")
    p.set_defaults(func=_cmd_plot)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
