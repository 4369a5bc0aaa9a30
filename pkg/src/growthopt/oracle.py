"""Budgeted stochastic oracles over the function zoo.

A first-order oracle answers a query at x with (value, gradient)
corrupted by noise; a zeroth-order oracle returns only the value.  Two
noise models:

* "gaussian": value + sigma*xi0, gradient + sigma*xi with standard
  normal xi; the gradient is then norm-clipped to clip_G (default
  1 + 3*sigma*sqrt(d)), since the epoch scheme's constants assume a
  hard bound ||g_hat|| <= G.  Clipping introduces an exponentially
  small bias.
* "sphere": gradient noise uniform on the radius-sigma sphere and value
  noise uniform on [-sqrt(3)*sigma, +sqrt(3)*sigma], so the bound
  ||g_hat|| <= lipschitz + sigma holds exactly and nothing is clipped.

Reproducibility contract: the noise consumed by query number q is a
pure function of (seed, q) -- one Philox stream per oracle, consumed in
query order with a fixed row width -- so identical (seed, config,
query sequence) gives bitwise-identical responses, and replaying a
run in a batch of any shape cannot change any trial's answers.
Distinct trials get distinct Philox keys and share no state.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import ndtr

#: noise standard deviation used when a caller does not specify one
DEFAULT_SIGMA = 1.0

_NOISE_CHUNK = 8192


class BudgetExhausted(RuntimeError):
    """Raised on any query past the oracle's budget T."""


class OracleResponse:
    """One oracle answer: value_hat, grad_hat (None for zeroth order),
    and the budget left after this query."""

    __slots__ = ("value_hat", "grad_hat", "queries_remaining")

    def __init__(self, value_hat, grad_hat, queries_remaining):
        self.value_hat = value_hat
        self.grad_hat = grad_hat
        self.queries_remaining = queries_remaining

    def __repr__(self):
        return (f"OracleResponse(value_hat={self.value_hat!r}, "
                f"grad_hat={self.grad_hat!r}, "
                f"queries_remaining={self.queries_remaining})")


def _noisy_response(f, x, rows, sigma, order, noise_model, clip_G):
    """Shared response kernel for single queries and batched slabs.

    x: (..., d) query points; rows: matching (..., w) noise rows.
    Returns (value_hat, grad_hat) with grad_hat None for zeroth order.
    Keeping one kernel for both paths is what makes batched runs agree
    bit-for-bit with query-by-query runs.
    """
    value = f._value_raw(x)
    if noise_model == "gaussian":
        value_hat = value + sigma * rows[..., 0]
    else:
        # bounded value channel: uniform via the probit transform
        value_hat = value + math.sqrt(3.0) * sigma * (2.0 * ndtr(rows[..., 0]) - 1.0)
    if order == "zeroth":
        return value_hat, None
    g = f._subgrad_raw(x)
    if noise_model == "gaussian":
        grad_hat = g + sigma * rows[..., 1:]
        if clip_G is not None:
            norms = np.sqrt(np.sum(grad_hat * grad_hat, axis=-1))[..., None]
            scale = np.where(norms > clip_G, np.divide(
                clip_G, norms, out=np.ones_like(norms), where=norms > 0), 1.0)
            grad_hat = grad_hat * scale
    else:
        z = rows[..., 1:]
        norms = np.sqrt(np.sum(z * z, axis=-1))[..., None]
        # direction of a standard normal vector is uniform on the sphere
        direction = np.divide(z, norms, out=np.zeros_like(z), where=norms > 0)
        grad_hat = g + sigma * direction
    return value_hat, grad_hat


class StochasticOracle:
    """Noisy view of a zoo function with a hard query budget.

    Parameters
    ----------
    f : KappaFunction      ground truth being perturbed
    budget : int           total queries T allowed
    seed : int             Philox stream key for this oracle
    sigma : float          per-coordinate noise standard deviation
    order : str            "first" (value + gradient) or "zeroth"
    noise_model : str      "gaussian" or "sphere"
    clip_G : float|None|"auto"
        gradient norm cap for the gaussian model; "auto" picks
        1 + 3*sigma*sqrt(d); None disables clipping (then no finite
        grad_bound is certified).
    """

    def __init__(self, f, budget, seed, sigma=DEFAULT_SIGMA, order="first",
                 noise_model="gaussian", clip_G="auto"):
        if order not in ("first", "zeroth"):
            raise ValueError(f"order must be 'first' or 'zeroth', got {order!r}")
        if noise_model not in ("gaussian", "sphere"):
            raise ValueError(f"unknown noise model {noise_model!r}")
        budget = int(budget)
        if budget < 1:
            raise ValueError("budget must be >= 1")
        sigma = float(sigma)
        if sigma < 0:
            raise ValueError("sigma must be >= 0")
        if clip_G == "auto":
            clip_G = (1.0 + 3.0 * sigma * math.sqrt(f.d)
                      if noise_model == "gaussian" else None)
        if clip_G is not None and not clip_G > 0:
            raise ValueError("clip_G must be positive")
        self.f = f
        self.budget = budget
        self.seed = int(seed)
        self.sigma = sigma
        self.order = order
        self.noise_model = noise_model
        self.clip_G = clip_G
        self.used = 0
        self._row_width = 1 if order == "zeroth" else f.d + 1
        self._gen = np.random.Generator(
            np.random.Philox(np.random.SeedSequence(self.seed)))
        self._buffer = np.empty((0, self._row_width))
        self._buffer_pos = 0

    @property
    def queries_remaining(self):
        return self.budget - self.used

    @property
    def grad_bound(self):
        """Certified bound on ||grad_hat||, or None if unbounded."""
        if self.order == "zeroth":
            return None
        if self.noise_model == "sphere":
            return self.f.lipschitz + self.sigma
        return self.clip_G

    def _noise_rows(self, count):
        """Next `count` noise rows of the stream; consumes budget."""
        if count > self.queries_remaining:
            raise BudgetExhausted(
                f"requested {count} queries with {self.queries_remaining} "
                f"of {self.budget} remaining")
        out = np.empty((count, self._row_width))
        filled = 0
        while filled < count:
            if self._buffer_pos == len(self._buffer):
                self._buffer = self._gen.standard_normal(
                    (_NOISE_CHUNK, self._row_width))
                self._buffer_pos = 0
            take = min(count - filled, len(self._buffer) - self._buffer_pos)
            out[filled:filled + take] = \
                self._buffer[self._buffer_pos:self._buffer_pos + take]
            self._buffer_pos += take
            filled += take
        self.used += count
        return out

    def query(self, x):
        """Stochastic (value, gradient) at x; decrements the budget."""
        x = self.f._check(x)
        if x.ndim != 1:
            raise ValueError("query takes a single point; see run_many for batches")
        rows = self._noise_rows(1)[0]
        value_hat, grad_hat = _noisy_response(
            self.f, x, rows, self.sigma, self.order, self.noise_model,
            self.clip_G)
        return OracleResponse(float(value_hat), grad_hat,
                              self.queries_remaining)


def query(oracle, x):
    """Module-level alias for oracle.query(x)."""
    return oracle.query(x)


def gaussian_mass_bounds(sigma, t):
    """Sandwich for the standard-normal mass P(0 <= z <= t), z ~ N(0, sigma^2).

    For 0 < t < sigma the density on [0, t] is between its value at
    sigma and at 0, giving

        t/(sigma*sqrt(2*pi*e)) <= P(0 <= z <= t) <= t/(sigma*sqrt(2*pi)).

    These constants drive the bisection posterior gain: a gradient
    sign at distance t from the minimizer is correct with probability
    at least 1/2 + a1*lambda*t^(kappa-1), a1 = 1/(sigma*sqrt(2*pi*e)).
    """
    sigma = float(sigma)
    t = float(t)
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    if not 0 < t < sigma:
        raise ValueError(f"bounds only hold for 0 < t < sigma, got t={t}")
    lower = t / (sigma * math.sqrt(2.0 * math.pi * math.e))
    upper = t / (sigma * math.sqrt(2.0 * math.pi))
    return lower, upper
