"""Invariant-suite verification.

Every analytic claim the library leans on is checked here by random
sampling at a fixed seed: projection laws for the feasible sets,
certified Lipschitz/growth/convexity properties of the function zoo,
the subgradient norm floor implied by growth, the linear sandwich on
Gaussian interval mass, and the uniform-convexity inequalities for
power functions and their coordinate sums.  One suite is adversarial:
the quadratic-to-linear hybrid must *fail* a global strong-convexity
check on its linear piece, separating quadratic-growth membership from
strong convexity.

Each suite reports its sample count, violation count, and worst-case
slack: the smallest margin by which the inequality held (negative
means the tolerance was the only thing absorbing it).  verify_lemmas
aggregates the suites into a JSON-ready report.
"""

from __future__ import annotations

import numpy as np
from scipy import stats

from ..functions import make_f0, make_f1, make_hybrid
from ..geometry import Ball, Box, default_domain, project_epoch
from ..oracle import gaussian_mass_bounds

_TOL = 1e-9


def _entry(description, samples, tolerance, violations, worst_slack,
           cases=None, passed=None):
    out = {
        "description": description,
        "samples": int(samples),
        "tolerance": tolerance,
        "violations": int(violations),
        "worst_slack": float(worst_slack),
        "passed": bool(violations == 0) if passed is None else bool(passed),
    }
    if cases is not None:
        out["cases"] = cases
    return out


def _case(samples, violations, worst_slack):
    return {"samples": int(samples), "violations": int(violations),
            "worst_slack": float(worst_slack)}


def _sample_ball_box(rng, d, n):
    """Uniform points of [0,1]^d intersected with the unit ball."""
    out = np.empty((0, d))
    while len(out) < n:
        cand = rng.random((2 * (n - len(out)) + 64, d))
        out = np.vstack([out, cand[np.sum(cand * cand, axis=1) <= 1.0]])
    return out[:n]


def _zoo_cases():
    """(name, function, domain sampler) for every zoo member tested."""
    cases = []
    for kappa in (1.5, 2.0, 3.0):
        for d in (2, 3):
            cases.append((f"f0(kappa={kappa}, d={d})", make_f0(kappa, d)))
    for kappa in (1.5, 2.0, 3.0):
        cases.append((f"f1(kappa={kappa}, d=2, a=0.1)",
                      make_f1(kappa, 2, 0.1)))
    cases.append(("hybrid", make_hybrid()))

    def sampler(f, rng, n):
        if f.kind == "hybrid":
            return rng.uniform(-0.5, 0.5, (n, 1))
        return _sample_ball_box(rng, f.d, n)

    return cases, sampler


def _domain_cases():
    return (("ball(0,1) d=2", Ball(np.zeros(2), 1.0)),
            ("box[0,1]^2", Box(np.zeros(2), np.ones(2))),
            ("ball-box d=2", default_domain(2)),
            ("ball-box d=3", default_domain(3)))


def check_projection_laws(seed, samples):
    """Idempotence, non-expansiveness, and feasibility of projections."""
    rng = np.random.default_rng(seed)
    tol = 1e-10
    idem, nonexp, feas = {}, {}, {}
    for name, dom in _domain_cases():
        d = dom.center_point().size
        x = rng.uniform(-2.0, 3.0, (samples, d))
        y = rng.uniform(-2.0, 3.0, (samples, d))
        px, py = dom.project(x), dom.project(y)

        drift = np.linalg.norm(dom.project(px) - px, axis=1)
        idem[name] = _case(samples, np.sum(drift > tol),
                           float(tol - drift.max()))

        stretch = (np.linalg.norm(px - py, axis=1)
                   - np.linalg.norm(x - y, axis=1))
        nonexp[name] = _case(samples, np.sum(stretch > tol),
                             float(tol - stretch.max()))

        inside = dom.contains(px)
        feas[name] = _case(samples, np.sum(~inside), float(np.min(inside)))

    def total(cases, description, tolerance):
        return _entry(description, samples * len(cases), tolerance,
                      sum(c["violations"] for c in cases.values()),
                      min(c["worst_slack"] for c in cases.values()),
                      cases=cases)

    return {
        "projection_idempotence": total(
            idem, "project(project(x)) == project(x)", tol),
        "projection_nonexpansive": total(
            nonexp, "||P(x) - P(y)|| <= ||x - y||", tol),
        "projection_feasibility": total(
            feas, "project(x) lands inside the domain", 0.0),
    }


def check_projection_optimality(seed, samples):
    """Variational inequality <x - P(x), z - P(x)> <= 0 over members z.

    This is the exact characterization of the Euclidean projection onto
    a convex set, so it certifies the Dykstra compositions (plain
    domains and epoch-restricted caps) without a brute-force grid.
    """
    rng = np.random.default_rng(seed)
    tol = 1e-8
    n_ref = 500
    cases = {}

    def run_case(name, members, project, d):
        x = rng.uniform(-2.0, 3.0, (samples, d))
        px = project(x)
        gap = x - px
        # <x - px, z - px> for every sampled member z, all pairs at once
        inner = gap @ members.T - np.sum(gap * px, axis=1, keepdims=True)
        cases[name] = _case(samples * n_ref, np.sum(inner > tol),
                            float(tol - inner.max()))

    for d in (2, 3):
        dom = default_domain(d)
        run_case(f"ball-box d={d}", _sample_ball_box(rng, d, n_ref),
                 dom.project, d)
        center = _sample_ball_box(rng, d, 1)[0]
        for radius in (0.1, 0.5):
            members = np.empty((0, d))
            while len(members) < n_ref:
                z = center + radius * rng.uniform(-1, 1, (4 * n_ref, d))
                keep = dom.contains(z) & (
                    np.linalg.norm(z - center, axis=1) <= radius)
                members = np.vstack([members, z[keep]])
            run_case(
                f"epoch cap d={d} R={radius}", members[:n_ref],
                lambda x, c=center, r=radius: project_epoch(dom, c, r, x), d)

    return _entry("<x - P(x), z - P(x)> <= 0 for members z",
                  sum(c["samples"] for c in cases.values()), tol,
                  sum(c["violations"] for c in cases.values()),
                  min(c["worst_slack"] for c in cases.values()),
                  cases=cases)


def check_lipschitz(seed, samples):
    """Sampled subgradient norms stay within the certified constant."""
    rng = np.random.default_rng(seed)
    zoo, sampler = _zoo_cases()
    cases = {}
    for name, f in zoo:
        x = sampler(f, rng, samples)
        norms = np.linalg.norm(f.subgrad(x), axis=1)
        slack = f.lipschitz + _TOL - norms
        cases[name] = _case(samples, np.sum(slack < 0), slack.min())
    return _entry("||subgrad(x)|| <= certified Lipschitz constant",
                  samples * len(zoo), _TOL,
                  sum(c["violations"] for c in cases.values()),
                  min(c["worst_slack"] for c in cases.values()), cases=cases)


def check_growth(seed, samples):
    """f(x) - f* >= lambda_growth * ||x - x*||^kappa at sampled x."""
    rng = np.random.default_rng(seed)
    zoo, sampler = _zoo_cases()
    cases = {}
    for name, f in zoo:
        x = sampler(f, rng, samples)
        r = np.linalg.norm(x - f.x_star, axis=1)
        slack = (f(x) - f.f_star) - f.lambda_growth * r ** f.kappa + _TOL
        cases[name] = _case(samples, np.sum(slack < 0), slack.min())
    return _entry("f - f* >= lambda * ||x - x*||^kappa",
                  samples * len(zoo), _TOL,
                  sum(c["violations"] for c in cases.values()),
                  min(c["worst_slack"] for c in cases.values()), cases=cases)


def check_convexity(seed, samples):
    """Interpolation inequality on random segment triples."""
    rng = np.random.default_rng(seed)
    zoo, sampler = _zoo_cases()
    cases = {}
    for name, f in zoo:
        x = sampler(f, rng, samples)
        y = sampler(f, rng, samples)
        t = rng.random((samples, 1))
        slack = (t[:, 0] * f(x) + (1 - t[:, 0]) * f(y)
                 - f(t * x + (1 - t) * y)) + _TOL
        cases[name] = _case(samples, np.sum(slack < 0), slack.min())
    return _entry("f(t x + (1-t) y) <= t f(x) + (1-t) f(y)",
                  samples * len(zoo), _TOL,
                  sum(c["violations"] for c in cases.values()),
                  min(c["worst_slack"] for c in cases.values()), cases=cases)


def check_subgradient_floor(seed, samples):
    """Growth forces ||g(x)|| >= lambda * ||x - x*||^(kappa-1)."""
    rng = np.random.default_rng(seed)
    zoo, sampler = _zoo_cases()
    cases = {}
    for name, f in zoo:
        x = sampler(f, rng, samples)
        r = np.linalg.norm(x - f.x_star, axis=1)
        norms = np.linalg.norm(f.subgrad(x), axis=1)
        slack = norms - f.lambda_growth * r ** (f.kappa - 1.0) + _TOL
        cases[name] = _case(samples, np.sum(slack < 0), slack.min())
    return _entry("||subgrad(x)|| >= lambda * ||x - x*||^(kappa-1)",
                  samples * len(zoo), _TOL,
                  sum(c["violations"] for c in cases.values()),
                  min(c["worst_slack"] for c in cases.values()), cases=cases)


def check_gradient_symmetry(seed, samples):
    """Coordinate-wise odd symmetry of the power-sum gradient."""
    rng = np.random.default_rng(seed)
    tol = 1e-12
    cases = {}
    for kappa in (1.5, 2.0, 3.0):
        f = make_f0(kappa, 2)
        x = rng.uniform(-1.0, 1.0, (samples, 2))
        # raw form: the symmetry is a property of the formula itself
        resid = np.abs(f._subgrad_raw(-x) + f._subgrad_raw(x)).max(axis=1)
        cases[f"kappa={kappa}"] = _case(samples, np.sum(resid > tol),
                                        float(tol - resid.max()))
    return _entry("grad f0(-x) == -grad f0(x)", samples * len(cases), tol,
                  sum(c["violations"] for c in cases.values()),
                  min(c["worst_slack"] for c in cases.values()), cases=cases)


def check_gaussian_mass_sandwich(grid_points=2000):
    """t/(s*sqrt(2 pi e)) <= P(0 <= Z <= t) <= t/(s*sqrt(2 pi)) on (0, s)."""
    cases = {}
    for sigma in (0.5, 1.0, 2.0):
        t = sigma * np.arange(1, grid_points + 1) / (grid_points + 1)
        pairs = np.array([gaussian_mass_bounds(sigma, ti) for ti in t])
        mass = stats.norm.cdf(t / sigma) - 0.5
        slack = np.minimum(mass - pairs[:, 0], pairs[:, 1] - mass)
        cases[f"sigma={sigma}"] = _case(grid_points, np.sum(slack < 0),
                                        slack.min())
    return _entry("linear sandwich on Gaussian interval mass",
                  grid_points * len(cases), 0.0,
                  sum(c["violations"] for c in cases.values()),
                  min(c["worst_slack"] for c in cases.values()), cases=cases)


def check_uniform_convexity_power(seed, samples):
    """|x|^k is k-uniformly convex with constant 4/2^k on [-1, 1].

    Checked on random (x, y, t) triples and again at the midpoint
    t = 1/2, where the inequality is tightest.
    """
    rng = np.random.default_rng(seed)
    cases = {}
    for k in (2, 3, 4):
        lam = 4.0 / 2 ** k
        x = rng.uniform(-1.0, 1.0, samples)
        y = rng.uniform(-1.0, 1.0, samples)
        t = rng.random(samples)
        worst, bad = np.inf, 0
        for tt in (t, np.full(samples, 0.5)):
            lhs = tt * np.abs(x) ** k + (1 - tt) * np.abs(y) ** k
            rhs = (np.abs(tt * x + (1 - tt) * y) ** k
                   + 0.5 * lam * tt * (1 - tt) * np.abs(x - y) ** k)
            slack = lhs - rhs + _TOL
            worst, bad = min(worst, slack.min()), bad + np.sum(slack < 0)
        cases[f"k={k}"] = _case(2 * samples, bad, worst)
    return _entry("t f(x) + (1-t) f(y) >= f(tx+(1-t)y) "
                  "+ (lam/2) t (1-t) |x-y|^k with lam = 4/2^k",
                  2 * samples * len(cases), _TOL,
                  sum(c["violations"] for c in cases.values()),
                  min(c["worst_slack"] for c in cases.values()), cases=cases)


def check_uniform_convexity_sum(seed, samples):
    """Coordinate sums inherit uniform convexity at cost d^(1/2 - 1/kappa).

    If each 1-D piece c|u|^kappa is uniformly convex with constant
    c * 4/2^kappa, the d-dimensional sum satisfies the same inequality
    in the Euclidean norm with that constant divided by d^(1/2-1/kappa).
    """
    rng = np.random.default_rng(seed)
    cases = {}
    for kappa in (2.0, 3.0):
        for d in (2, 3):
            f = make_f0(kappa, d)
            lam = f.c_kappa * (4.0 / 2 ** kappa) / d ** (0.5 - 1.0 / kappa)
            x = rng.uniform(-1.0, 1.0, (samples, d))
            y = rng.uniform(-1.0, 1.0, (samples, d))
            t = rng.random((samples, 1))
            lhs = t[:, 0] * f._value_raw(x) + (1 - t[:, 0]) * f._value_raw(y)
            gap = np.linalg.norm(x - y, axis=1)
            rhs = (f._value_raw(t * x + (1 - t) * y)
                   + 0.5 * lam * t[:, 0] * (1 - t[:, 0]) * gap ** kappa)
            slack = lhs - rhs + _TOL
            cases[f"kappa={kappa} d={d}"] = _case(
                samples, np.sum(slack < 0), slack.min())
    return _entry("power sums are uniformly convex in the 2-norm "
                  "with constant min_i lam_i / d^(1/2 - 1/kappa)",
                  samples * len(cases), _TOL,
                  sum(c["violations"] for c in cases.values()),
                  min(c["worst_slack"] for c in cases.values()), cases=cases)


def check_hybrid_not_strongly_convex(seed, samples):
    """The hybrid's linear piece defeats global strong convexity.

    Strong convexity with any positive modulus demands a strictly
    positive interpolation surplus, but segments inside [1/4, 1/2] are
    affine, so the surplus is zero there.  This suite *passes* when it
    finds violations (worst_slack reports the largest deficit).
    """
    rng = np.random.default_rng(seed)
    f = make_hybrid()
    mu = f.lambda_growth  # the natural modulus candidate for 2x^2-like growth
    x = rng.uniform(0.25, 0.5, (samples, 1))
    y = rng.uniform(0.25, 0.5, (samples, 1))
    t = rng.random((samples, 1))
    surplus = (t[:, 0] * f(x) + (1 - t[:, 0]) * f(y)
               - f(t * x + (1 - t) * y))
    needed = 0.5 * mu * t[:, 0] * (1 - t[:, 0]) * (x - y)[:, 0] ** 2
    deficit = needed - surplus
    violations = int(np.sum(deficit > 1e-12))
    return _entry("strong convexity fails on the hybrid's linear piece "
                  "(violations are expected and required)",
                  samples, 1e-12, violations, float(deficit.max()),
                  passed=violations > 0)


def verify_lemmas(seed=0, samples=100_000, geometry_samples=2_000):
    """Run every invariant suite and return a JSON-ready report."""
    children = iter(np.random.SeedSequence(seed).spawn(16))
    suites = {}
    suites.update(check_projection_laws(next(children), geometry_samples))
    suites["projection_optimality"] = check_projection_optimality(
        next(children), geometry_samples)
    suites["lipschitz_bound"] = check_lipschitz(next(children), samples)
    suites["growth_certificate"] = check_growth(next(children), samples)
    suites["convexity"] = check_convexity(next(children), samples)
    suites["subgradient_floor"] = check_subgradient_floor(
        next(children), samples)
    suites["gradient_odd_symmetry"] = check_gradient_symmetry(
        next(children), samples)
    suites["gaussian_mass_sandwich"] = check_gaussian_mass_sandwich()
    suites["uniform_convexity_power"] = check_uniform_convexity_power(
        next(children), samples)
    suites["uniform_convexity_sum"] = check_uniform_convexity_sum(
        next(children), samples)
    suites["hybrid_strong_convexity_gap"] = check_hybrid_not_strongly_convex(
        next(children), samples)
    return {
        "seed": int(seed),
        "samples": int(samples),
        "geometry_samples": int(geometry_samples),
        "all_passed": all(s["passed"] for s in suites.values()),
        "suites": suites,
    }
