"""Analytic lower-bound laboratory for the two-point family (f0, f1).

The minimax argument runs two nearly identical problem instances
against the same algorithm: f0 and its seam-shifted twin f1 differ
only on the slab 0 <= x_1 <= 4a, where their minimizers sit 2a apart.
An observation at x is a Gaussian with mean (f(x), g(x)) and scale
sigma, so T queries carry at most

    KL = (T / (2 sigma^2)) (max_x ||g0 - g1||^2 + max_x (f0 - f1)^2)

nats of information about which instance is live.  When a shrinks
like T^(-1/(2k-2)) the KL stays bounded, no estimator can reliably
tell the instances apart (Fano), and every algorithm must suffer
point error proportional to a.  This module evaluates those KL
quantities exactly (by dense grid search over the only coordinate
where the instances differ), the two-hypothesis Fano error floor,
and an empirical head-to-head of the epoch scheme against the pair.
"""

from __future__ import annotations

import math

import numpy as np

from .epochgd import compute_constants, run_many
from .functions import _signed_power, make_f0, make_f1
from .geometry import default_domain
from .oracle import StochasticOracle

#: grid resolution for the 1-D maxima: step a/10^4 over [0, 4a]
_GRID_POINTS_PER_A = 10**4


def _check_offset(a):
    a = float(a)
    if not 0 < 4 * a <= 1.0:
        raise ValueError(f"need 0 < 4a <= 1, got a={a}")
    return a


def kl_terms(kappa, d, a):
    """Worst-case squared gradient and value gaps of the (f0, f1) pair.

    Both differences vanish off coordinate 1 and off the slab
    [0, 4a], so the maxima are 1-D grid searches.  Returns (M_g, M_f).
    """
    a = _check_offset(a)
    f = make_f0(kappa=kappa, d=d)
    c1, kappa = f.c_kappa, f.kappa
    step = a / _GRID_POINTS_PER_A
    x1 = np.arange(0.0, 4 * a + step / 2, step)
    gdiff = c1 * kappa * (_signed_power(x1 - 2 * a, kappa - 1.0)
                          - _signed_power(x1, kappa - 1.0))
    c2 = (4 * a) ** kappa - (2 * a) ** kappa
    vdiff = c1 * (np.abs(x1 - 2 * a) ** kappa + c2 - x1 ** kappa)
    return float(np.max(gdiff * gdiff)), float(np.max(vdiff * vdiff))


def kl_first_order(kappa, d, a, sigma, T):
    """KL divergence bound between T first-order observations of f0/f1."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if T < 1:
        raise ValueError("T must be >= 1")
    M_g, M_f = kl_terms(kappa, d, a)
    return T / (2.0 * sigma * sigma) * (M_g + M_f)


def kl_zeroth_order(kappa, d, a, sigma, T):
    """KL bound when only function values are observed (no gradients)."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if T < 1:
        raise ValueError("T must be >= 1")
    _, M_f = kl_terms(kappa, d, a)
    return T / (2.0 * sigma * sigma) * M_f


def fano_bound(gamma):
    """Two-hypothesis error floor max(e^-gamma / 4, (1 - sqrt(gamma/2))/2).

    Any test deciding between two hypotheses whose observation laws are
    gamma apart in KL errs with at least this probability.
    """
    gamma = float(gamma)
    if gamma < 0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    return max(math.exp(-gamma) / 4.0, (1.0 - math.sqrt(gamma / 2.0)) / 2.0)


def indistinguishability_experiment(kappa, sigma, T, trials, d=2, delta=0.2,
                                    base_seed=0):
    """Run the epoch scheme head-to-head against f0 and f1.

    The separation is the critical a = T^(-1/(2*kappa-2)).  Half the
    trials draw their observations from f0, half from f1; each run's
    point error is measured against its own instance's minimizer, and
    a trial counts as misidentified when the output lands strictly
    closer to the other instance's minimizer.

    Returns a dict with the separation a, the KL gamma at that a, the
    Fano floor a*fano_bound(gamma) on the mean point error, and the
    observed mean point error and misidentification rate.
    """
    if trials < 100:
        raise ValueError("need at least 100 trials for a stable rate")
    a = float(T) ** (-1.0 / (2 * kappa - 2))
    gamma = kl_first_order(kappa, d, a, sigma, T) if sigma > 0 else math.inf
    f_pair = (make_f0(kappa=kappa, d=d), make_f1(kappa=kappa, d=d, a=a))
    domain = default_domain(d)
    split = (trials + 1) // 2

    point_errors = []
    misidentified = []
    for which, f in enumerate(f_pair):
        n = split if which == 0 else trials - split
        seeds = [int(np.random.SeedSequence([base_seed, which, i])
                     .generate_state(1, dtype=np.uint64)[0]) for i in range(n)]
        oracles = [StochasticOracle(f, budget=T, seed=s, sigma=sigma)
                   for s in seeds]
        schedule = compute_constants(kappa, f.lambda_growth,
                                     oracles[0].grad_bound, delta, T)
        other = f_pair[1 - which].x_star
        for r in run_many(oracles, domain, schedule):
            point_errors.append(r.point_error)
            d_other = float(np.sqrt(np.sum((r.x_hat - other) ** 2)))
            misidentified.append(d_other < r.point_error)

    fano = fano_bound(gamma) if math.isfinite(gamma) else 0.0
    return {
        "a": a,
        "gamma": gamma,
        "fano": fano,
        "floor": a * fano,
        "mean_point_error": float(np.mean(point_errors)),
        "misidentification_rate": float(np.mean(misidentified)),
        "trials": trials,
    }
