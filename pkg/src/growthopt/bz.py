"""Noise-tolerant bisection for 1-D stochastic optimization.

A convex 1-D function with a kappa-growth minimum has a nondecreasing
gradient crossing zero at the minimizer, so locating the minimizer is
a noisy root-finding problem: query a point, observe the sign of a
noisy gradient, and the sign points left or right.  The posterior
bisection scheme keeps a probability vector over the m cells of a
uniform grid on [0,1], queries the grid point nearest the posterior
median, multiplies the cell masses on the sign-consistent side by
(1+2*alpha) and the other side by (1-2*alpha), and renormalizes.

The grid resolution and the update weight alpha are tied to the
problem class: under Gaussian gradient noise the probability that a
single sign observation points the right way exceeds 1/2 by at least
a1*lam*|x-x*|^(kappa-1) near the minimizer (a1 = 1/(sigma*sqrt(2*pi*e)),
the linear lower bound on the normal CDF around 0), so alpha is set to
that margin at the smallest distance the grid is expected to resolve,
1/(3m).  With bounded sign noise (kappa=1) the margin is lam itself,
distance-free.
"""

from __future__ import annotations

import math

import numpy as np

from .oracle import DEFAULT_SIGMA

#: cap on the grid size; the kappa=1 rule is exponential in T
M_MAX = 10**7

#: updates never exceed this weight, keeping (1-2*alpha) bounded away
#: from zero
ALPHA_MAX = 0.4


def grid_size(kappa, lam, T):
    """Number of grid cells for a budget-T run.

    kappa=1 uses an exponential grid min(ceil(e^{T*lam^2/2}), M_MAX);
    kappa>1 uses ceil((T/ln T)^{1/(2*kappa-2)}), same cap.
    """
    kappa = float(kappa)
    lam = float(lam)
    T = int(T)
    if T < 2:
        raise ValueError("grid sizing needs T >= 2")
    if lam <= 0:
        raise ValueError(f"lam must be positive, got {lam}")
    if kappa < 1:
        raise ValueError(f"kappa must be >= 1, got {kappa}")
    if kappa == 1:
        expo = T * lam * lam / 2.0
        if expo >= math.log(M_MAX):
            return M_MAX
        return min(math.ceil(math.exp(expo)), M_MAX)
    return min(math.ceil((T / math.log(T)) ** (1.0 / (2 * kappa - 2))), M_MAX)


def step_weight(kappa, lam, m, sigma=DEFAULT_SIGMA):
    """Update weight alpha: the sign margin at distance 1/(3m)."""
    if lam <= 0:
        raise ValueError(f"lam must be positive, got {lam}")
    if kappa == 1:
        return min(ALPHA_MAX, lam)
    if sigma <= 0:
        raise ValueError("sigma must be positive for kappa > 1")
    a1 = 1.0 / (sigma * math.sqrt(2.0 * math.pi * math.e))
    return min(ALPHA_MAX, a1 * lam * (1.0 / (3.0 * m)) ** (kappa - 1.0))


class BZState:
    """Posterior bisection state over the m cells of [0,1].

    posterior[k] is the probability that the crossing lies in
    [k/m, (k+1)/m); it stays a probability vector after every update.
    """

    def __init__(self, m, alpha, n_trials=1):
        m = int(m)
        if m < 1:
            raise ValueError("need at least one grid cell")
        if not 0 < alpha <= 0.5:
            raise ValueError(f"alpha must lie in (0, 1/2], got {alpha}")
        self.m = m
        self.alpha = float(alpha)
        self.posterior = np.full((n_trials, m), 1.0 / m)
        self.queries_used = 0

    def query_points(self):
        """Grid point nearest each trial's posterior median."""
        cum = np.cumsum(self.posterior, axis=1)
        j = np.sum(cum < 0.5, axis=1)
        j = np.minimum(j, self.m - 1)
        rows = np.arange(len(j))
        prev = np.where(j > 0, cum[rows, j - 1], 0.0)
        frac = (0.5 - prev) / self.posterior[rows, j]
        k = np.clip(np.round(j + frac), 1, max(self.m - 1, 1))
        return k.astype(np.int64)

    def update(self, k, signs):
        """Tilt the posterior around grid point k/m by the signs.

        sign +1 means the observed gradient was positive, so the
        crossing sits left of k/m; cells on that side gain weight
        (1+2*alpha), the others (1-2*alpha), then renormalize.
        """
        cells = np.arange(self.m)
        left = cells[None, :] < np.asarray(k)[:, None]
        crossing_left = np.asarray(signs)[:, None] > 0
        up, down = 1.0 + 2 * self.alpha, 1.0 - 2 * self.alpha
        factors = np.where(left == crossing_left, up, down)
        self.posterior *= factors
        self.posterior /= self.posterior.sum(axis=1, keepdims=True)
        self.queries_used += 1

    def best_cells(self):
        return np.argmax(self.posterior, axis=1)


def bz_run_many(grad_oracle, kappa, lam, T, n_trials, sigma=DEFAULT_SIGMA,
                m=None):
    """Run n_trials posterior bisections in lockstep.

    grad_oracle maps an array of query points (one per trial) to an
    array of noisy gradient values; only the signs are used.  Returns
    (intervals, x_hats): the highest-posterior cell per trial and its
    midpoint.
    """
    kappa = float(kappa)
    T = int(T)
    if T < 1:
        raise ValueError("budget T must be >= 1")
    if kappa < 1:
        raise ValueError(f"kappa must be >= 1, got {kappa}")
    if m is None:
        m = grid_size(kappa, lam, max(T, 2))
    if m == 1:
        # grid too coarse to learn anything; the single cell is [0,1]
        lo = np.zeros(n_trials)
        hi = np.ones(n_trials)
        return np.stack([lo, hi], axis=1), np.full(n_trials, 0.5)
    alpha = step_weight(kappa, lam, m, sigma)
    state = BZState(m, alpha, n_trials=n_trials)
    for _ in range(T):
        k = state.query_points()
        g = np.asarray(grad_oracle(k / m), dtype=float)
        signs = np.where(g > 0, 1, -1)
        state.update(k, signs)
    best = state.best_cells()
    intervals = np.stack([best / m, (best + 1) / m], axis=1)
    return intervals, (best + 0.5) / m


def bz_run(grad_oracle, kappa, lam, T, sigma=DEFAULT_SIGMA, m=None):
    """Single-trial bisection; see bz_run_many.

    grad_oracle here maps a scalar query point to a scalar noisy
    gradient.  Returns ((lo, hi), x_hat).
    """
    def rowwise(xs):
        return np.array([grad_oracle(float(x)) for x in xs])

    intervals, x_hats = bz_run_many(rowwise, kappa, lam, T, 1, sigma, m)
    return (float(intervals[0, 0]), float(intervals[0, 1])), float(x_hats[0])


def sign_margin(x, x_star, kappa, lam, sigma):
    """Closed-form lower bound on |P(noisy grad > 0) - 1/2|.

    For f(x) = lam*|x-x*|^kappa with N(0, sigma^2) gradient noise the
    excess probability that the sign points toward the minimizer is at
    least a1*lam*|x-x*|^(kappa-1) whenever the true gradient magnitude
    is below sigma (the linear-response range of the normal CDF).
    """
    a1 = 1.0 / (sigma * math.sqrt(2.0 * math.pi * math.e))
    return a1 * lam * np.abs(np.asarray(x) - x_star) ** (kappa - 1.0)
