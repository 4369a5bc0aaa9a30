"""Tests for the experiment harness.

Covers config validation and TOML loading, sweep reproducibility (the
row table must be a pure function of the config), the CSV round trip,
rate fitting on exact synthetic power laws, the SVG plot contract
(including a byte-for-byte golden file), the invariant-suite report,
and a smoke pass over every CLI subcommand.
"""

import json
import math
from pathlib import Path

import numpy as np
import pytest

from growthopt.harness import (ExperimentConfig, RateFit, emit_plot,
                               fit_rate, load_config, read_table, sweep,
                               verify_lemmas, write_table)
from growthopt.harness.cli import main as cli_main
from growthopt.harness.sweep import TABLE_COLUMNS, mean_by_budget, trial_seed

GOLDEN = Path(__file__).parent / "golden"


# ---------------------------------------------------------------- config

def test_config_defaults_are_valid():
    config = ExperimentConfig()
    assert config.function == "f0"
    assert config.budgets == tuple(2 ** k for k in range(10, 18))
    assert config.noise_model == "gaussian"
    assert ExperimentConfig(oracle="sphere-bounded").noise_model == "sphere"


@pytest.mark.parametrize("changes,field", [
    ({"function": "f9"}, "function"),
    ({"algorithm": "sgd"}, "algorithm"),
    ({"oracle": "bernoulli"}, "oracle"),
    ({"order": "second"}, "order"),
    ({"kappa": 1.0}, "kappa"),                      # epochgd needs kappa > 1
    ({"order": "zeroth"}, "order"),                 # epochgd needs gradients
    ({"d": 0}, "d"),
    ({"algorithm": "bz", "d": 2, "lam": 1.0, "kappa": 1.0}, "d"),
    ({"algorithm": "bz", "d": 1, "kappa": 1.0}, "lam"),
    ({"function": "hybrid", "d": 2}, "d"),
    ({"function": "f1", "a": 0.0}, "a"),
    ({"sigma": -0.1}, "sigma"),
    ({"delta": 0.0}, "delta"),
    ({"delta": 1.0}, "delta"),
    ({"lam": 0.0}, "lam"),
    ({"budgets": ()}, "budgets"),
    ({"budgets": (100, 100)}, "budgets"),
    ({"budgets": (2048, 1024)}, "budgets"),
    ({"budgets": (0, 10)}, "budgets"),
    ({"trials": 0}, "trials"),
])
def test_config_errors_name_the_field(changes, field):
    with pytest.raises(ValueError, match=f"config field '{field}'"):
        ExperimentConfig(**changes)


def test_config_replace_revalidates():
    config = ExperimentConfig()
    assert config.replace(sigma=0.7).sigma == 0.7
    assert config.sigma == 0.1
    with pytest.raises(ValueError, match="config field 'sigma'"):
        config.replace(sigma=-1.0)


def test_load_config_from_toml(tmp_path):
    path = tmp_path / "exp.toml"
    path.write_text('kappa = 3.0\nbudgets = [256, 512]\ntrials = 2\n')
    config = load_config(str(path), sigma=0.5, lam=None)
    assert config.kappa == 3.0
    assert config.budgets == (256, 512)
    assert config.trials == 2
    # the override wins, the None override is dropped
    assert config.sigma == 0.5
    assert config.lam is None


def test_load_config_rejects_unknown_keys(tmp_path):
    path = tmp_path / "exp.toml"
    path.write_text('kapa = 3.0\nsigmma = 0.2\n')
    with pytest.raises(ValueError, match=r"unknown config keys.*kapa.*sigmma"):
        load_config(str(path))


# ---------------------------------------------------------------- sweeps

def test_trial_seed_is_stable_and_injective_in_practice():
    assert trial_seed(0, 1024, 0) == 1151690359399511745
    seeds = {trial_seed(b, T, i)
             for b in (0, 1) for T in (1024, 2048) for i in range(8)}
    assert len(seeds) == 32


def test_noiseless_epochgd_row_is_frozen():
    config = ExperimentConfig(sigma=0.0, budgets=(1024,), trials=1)
    (row,) = sweep(config)
    assert set(row) == set(TABLE_COLUMNS)
    assert row["seed"] == 1151690359399511745
    assert row["T"] == 1024
    assert row["queries_used"] == 928
    assert row["f_error"] == pytest.approx(2.9029800832342447e-07, rel=1e-12)


def test_sweep_is_byte_reproducible(tmp_path):
    paths = [tmp_path / name for name in ("first.csv", "second.csv")]
    for path in paths:
        config = ExperimentConfig(budgets=(1024, 2048), trials=3,
                                  sigma=0.1, csv_out=str(path))
        sweep(config)
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_sweep_rows_come_in_budget_trial_order():
    config = ExperimentConfig(budgets=(1024, 2048), trials=3)
    rows = sweep(config)
    assert [(r["T"], r["trial"]) for r in rows] == [
        (T, i) for T in (1024, 2048) for i in range(3)]


def test_sweep_rejects_lam_above_certificate():
    config = ExperimentConfig(budgets=(64,), trials=1, lam=1e9)
    with pytest.raises(ValueError, match="certified"):
        sweep(config)


def test_bz_sweep_rows_are_consistent():
    config = ExperimentConfig(algorithm="bz", function="f0", kappa=1.0,
                              d=1, lam=0.2, sigma=0.0,
                              budgets=(64, 128), trials=4)
    rows = sweep(config)
    assert len(rows) == 8
    for row in rows:
        assert row["queries_used"] == row["T"]
        assert 0.0 <= row["point_error"] <= 1.0
        assert row["f_error"] == pytest.approx(
            0.2 * row["point_error"], rel=1e-12)
    assert rows == sweep(config)


def test_mean_error_decreases_when_epoch_count_grows():
    # Consecutive powers of two can share an identical epoch schedule
    # (the leftover budget is never spent), so means there are ties up
    # to noise.  Across budgets where the schedule gains an epoch the
    # mean error must drop.  These four budgets each add epochs.
    config = ExperimentConfig(budgets=(2 ** 10, 2 ** 12, 2 ** 14, 2 ** 16),
                              trials=10, sigma=0.1)
    _, means = mean_by_budget(sweep(config), "f_error")
    assert np.all(np.diff(means) < 0)


def test_table_round_trip(tmp_path):
    rows = sweep(ExperimentConfig(budgets=(1024, 2048), trials=2))
    path = tmp_path / "table.csv"
    write_table(rows, str(path))
    back = read_table(str(path))
    assert back == rows
    assert all(isinstance(r["T"], int) for r in back)
    assert all(isinstance(r["f_error"], float) for r in back)


# ----------------------------------------------------------- rate fitting

def _power_law_rows(coeff, exponent, budgets=(1024, 2048, 4096, 8192)):
    rows = []
    for T in budgets:
        for trial in range(3):
            err = coeff * T ** exponent
            rows.append({"kappa": 2.0, "d": 2, "sigma": 0.1, "T": T,
                         "trial": trial, "f_error": err,
                         "point_error": math.sqrt(err),
                         "queries_used": T, "seed": 0})
    return rows


def test_fit_rate_recovers_exact_power_laws():
    fit = fit_rate(_power_law_rows(7.0, -1.0))
    assert fit.slope == pytest.approx(-1.0, abs=1e-12)
    assert fit.intercept == pytest.approx(math.log(7.0), abs=1e-10)
    assert fit.residual_rms < 1e-12
    assert len(fit.points) == 4

    fit = fit_rate(_power_law_rows(3.0, -1.5), column="point_error")
    assert fit.slope == pytest.approx(-0.75, abs=1e-12)


def test_fit_rate_requires_four_positive_budgets():
    with pytest.raises(ValueError, match=">= 4 distinct budgets"):
        fit_rate(_power_law_rows(7.0, -1.0, budgets=(512, 1024, 2048)))
    with pytest.raises(ValueError, match="must be positive"):
        fit_rate(_power_law_rows(0.0, -1.0))


def test_mean_by_budget_sorts_and_averages():
    rows = [{"T": 20, "f_error": 5.0}, {"T": 10, "f_error": 1.0},
            {"T": 10, "f_error": 3.0}]
    Ts, means = mean_by_budget(rows, "f_error")
    assert Ts.tolist() == [10.0, 20.0]
    assert means.tolist() == [2.0, 5.0]


# ------------------------------------------------------------------ plots

def test_plot_matches_golden_file(tmp_path):
    path = tmp_path / "rate_plot.svg"
    svg = emit_plot(_power_law_rows(7.0, -1.0), str(path), theory=-1.0)
    golden = (GOLDEN / "rate_plot.svg").read_text()
    assert svg == golden
    assert path.read_text() == golden


def test_plot_annotates_fit_and_theory(tmp_path):
    svg = emit_plot(_power_law_rows(7.0, -1.0), str(tmp_path / "p.svg"),
                    theory=-0.5)
    assert "fit: -1.000" in svg
    assert "theory: -0.500" in svg
    assert "ln T" in svg
    assert "ln mean f_error" in svg


def test_plot_theory_defaults_to_fitted_slope(tmp_path):
    svg = emit_plot(_power_law_rows(2.0, -1.5), str(tmp_path / "p.svg"))
    assert "fit: -1.500" in svg
    assert "theory: -1.500" in svg


def test_plot_accepts_a_rate_fit(tmp_path):
    rows = _power_law_rows(7.0, -1.0)
    from_rows = emit_plot(rows, str(tmp_path / "a.svg"), theory=-1.0)
    from_fit = emit_plot(fit_rate(rows), str(tmp_path / "b.svg"),
                         theory=-1.0)
    assert from_fit == from_rows


def test_plot_needs_two_budgets(tmp_path):
    rows = _power_law_rows(7.0, -1.0, budgets=(1024,))
    with pytest.raises(ValueError, match=">= 2 points"):
        emit_plot(rows, str(tmp_path / "p.svg"))


# ------------------------------------------------------- invariant report

def test_verify_lemmas_report_shape():
    report = verify_lemmas(seed=0, samples=400, geometry_samples=120)
    assert report["all_passed"] is True
    assert report["samples"] == 400
    for name in ("projection_optimality", "lipschitz_bound",
                 "growth_certificate", "convexity", "subgradient_floor",
                 "gradient_odd_symmetry", "gaussian_mass_sandwich",
                 "uniform_convexity_power", "uniform_convexity_sum",
                 "hybrid_strong_convexity_gap"):
        suite = report["suites"][name]
        assert suite["passed"] is True
        assert suite["samples"] > 0
    # the strong-convexity suite passes by *finding* counterexamples
    assert report["suites"]["hybrid_strong_convexity_gap"]["violations"] > 0
    json.loads(json.dumps(report, default=float))


# -------------------------------------------------------------------- CLI

def test_cli_run_epochgd(capsys):
    code = cli_main(["run-epochgd", "--budget", "1024", "--sigma", "0",
                     "--seed", "3"])
    out = capsys.readouterr().out
    assert code == 0
    assert "f_error:" in out and "queries_used:" in out


def test_cli_run_bz(capsys):
    code = cli_main(["run-bz", "--kappa", "1", "--lam", "0.2",
                     "--budget", "64", "--sigma", "0"])
    assert code == 0
    assert "point_error:" in capsys.readouterr().out


def test_cli_rate_sweep_writes_outputs(tmp_path, capsys):
    code = cli_main(["rate-sweep", "--budgets", "1024,2048,4096,8192",
                     "--trials", "2", "--sigma", "0.1",
                     "--out", str(tmp_path)])
    out = capsys.readouterr().out
    assert code == 0
    assert "f_error: slope" in out and "theory" in out
    csv_path = tmp_path / "rate_sweep.csv"
    assert csv_path.exists()
    assert len(read_table(str(csv_path))) == 8
    assert "<svg" in (tmp_path / "rate_fit.svg").read_text()


def test_cli_kl_sweep(tmp_path, capsys):
    code = cli_main(["kl-sweep", "--kappa", "2", "--budget", "500",
                     "--out", str(tmp_path)])
    out = capsys.readouterr().out
    assert code == 0
    assert "first-order slope vs a" in out
    assert "zeroth-order slope vs a" in out
    assert (tmp_path / "kl_sweep.csv").exists()


def test_cli_verify_lemmas(tmp_path, capsys):
    code = cli_main(["verify-lemmas", "--samples", "300",
                     "--geometry-samples", "80", "--out", str(tmp_path)])
    out = capsys.readouterr().out
    assert code == 0
    assert "PASS lipschitz_bound" in out
    report = json.loads((tmp_path / "lemma_report.json").read_text())
    assert report["all_passed"] is True


def test_cli_plot_from_csv(tmp_path, capsys):
    csv_path = tmp_path / "sweep.csv"
    write_table(_power_law_rows(7.0, -1.0), str(csv_path))
    code = cli_main(["plot", str(csv_path), "--column", "point_error",
                     "--theory", "-0.5", "--out", str(tmp_path)])
    assert code == 0
    svg = (tmp_path / "sweep_point_error.svg").read_text()
    assert "theory: -0.500" in svg
    assert "ln mean point_error" in svg


def test_cli_rejects_bad_budget_list():
    with pytest.raises(SystemExit):
        cli_main(["rate-sweep", "--budgets", "1024,banana"])


def test_cli_requires_a_subcommand():
    with pytest.raises(SystemExit):
        cli_main([])
