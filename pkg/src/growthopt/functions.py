"""Convex test functions with certified growth and Lipschitz constants.

Every function here knows its minimizer, its minimum value, a growth
constant lambda_growth with

    f(x) - f(x*) >= lambda_growth * ||x - x*||^kappa   on its domain,

and a gradient-norm bound (at most 1 on the natural domain).  The
growth constant is stored WITHOUT the factor 1/2 sometimes attached to
this inequality; divide by 2 if you need the halved convention.

The zoo:

* ``f0``: c * sum_i |x_i|^kappa, minimized at the origin;
* ``f1``: the same sum with coordinate 1 reflected around 2a below the
  threshold x_1 = 4a, minimized at (2a, 0, ..., 0) and equal to f0
  above the threshold -- the hard-to-distinguish partner of f0 used in
  lower-bound experiments;
* ``hybrid``: one-dimensional, 2x^2 in the middle and |x| - 1/8 outside,
  a kappa = 2 growth function that is not strongly convex.

Scale choice for f0/f1: start from c = 1 (kappa >= 2) or c = d^(-kappa/2)
(kappa < 2) and divide by the analytic sup of the gradient norm over
[0,1]^d ∩ unit ball whenever that sup exceeds 1.  The unscaled values
are NOT 1-Lipschitz there (e.g. kappa = 2, c = 1: ||grad|| = 2 at a box
vertex on the sphere), so the cap is what makes the certificate honest.
"""

from __future__ import annotations

import math

import numpy as np

from .geometry import Box, default_domain

#: ids accepted by make_function and experiment configs
FUNCTION_IDS = ("f0", "f1", "hybrid")


def _signed_power(u, p):
    # sign(u) * |u|^p, the derivative convention for |u|^{p+1} pieces;
    # works for any real p > 0 including non-integer exponents.
    return np.sign(u) * np.abs(u) ** p


class KappaFunction:
    """Base: convex f with growth f - f* >= lambda_growth * ||x - x*||^kappa.

    Attributes
    ----------
    kind : str            zoo id ("f0", "f1", "hybrid")
    kappa : float         growth exponent, > 1
    d : int               dimension
    c_kappa : float       leading scale of the closed form
    lambda_growth : float growth constant (no 1/2 factor)
    lipschitz : float     certified sup of ||subgrad|| over the domain
    x_star : ndarray      minimizer
    f_star : float        minimum value
    domain :              natural domain (geometry object)
    """

    kind = "abstract"

    def __call__(self, x):
        x = self._check(x)
        return self._value_raw(x)

    def subgrad(self, x):
        x = self._check(x)
        return self._subgrad_raw(x)

    def _check(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape == () and self.d == 1:
            x = x[None]
        if x.shape[-1] != self.d:
            raise ValueError(f"expected dimension {self.d}, got {x.shape}")
        inside = self.domain.contains(x)
        if not np.all(inside):
            raise ValueError("point outside the function's natural domain")
        return x

    def __repr__(self):
        return (f"{type(self).__name__}(kappa={self.kappa}, d={self.d}, "
                f"c_kappa={self.c_kappa:.6g}, "
                f"lambda_growth={self.lambda_growth:.6g})")


def _base_scale(kappa, d):
    # Unnormalized scale and the analytic sup of the gradient norm of
    # c * sum |x_i|^kappa over [0,1]^d ∩ unit ball.  For kappa >= 2 the
    # sup sits at a box vertex on the sphere (norm kappa*c); for
    # kappa < 2 mass spreads, x_i = 1/sqrt(d) (norm kappa*c*d^{(2-kappa)/2}).
    c = 1.0 if kappa >= 2 else d ** (-kappa / 2.0)
    grad_sup = kappa * c * (1.0 if kappa >= 2 else d ** ((2.0 - kappa) / 2.0))
    return c, grad_sup


class PowerSum(KappaFunction):
    """f0(x) = c_kappa * sum_i |x_i|^kappa on [0,1]^d ∩ unit ball."""

    kind = "f0"

    def __init__(self, kappa, d):
        kappa = float(kappa)
        d = int(d)
        if kappa <= 1:
            raise ValueError(f"kappa must exceed 1, got {kappa}")
        if d < 1:
            raise ValueError("dimension must be >= 1")
        c, grad_sup = _base_scale(kappa, d)
        if grad_sup > 1.0:
            c /= grad_sup
            grad_sup = 1.0
        self.kappa = kappa
        self.d = d
        self.c_kappa = c
        # ||x||_kappa^kappa >= d^{1-kappa/2} ||x||_2^kappa for kappa >= 2
        # (norm equivalence); for kappa < 2 the inequality holds with 1.
        self.lambda_growth = c * d ** (1.0 - kappa / 2.0) if kappa >= 2 else c
        self.lipschitz = grad_sup
        self.x_star = np.zeros(d)
        self.f_star = 0.0
        self.domain = default_domain(d)

    def _value_raw(self, x):
        return self.c_kappa * np.sum(np.abs(x) ** self.kappa, axis=-1)

    def _subgrad_raw(self, x):
        return self.kappa * self.c_kappa * _signed_power(x, self.kappa - 1.0)


class ShiftedPowerSum(KappaFunction):
    """f1: equals f0 for x_1 > 4a; below, coordinate 1 is recentered at 2a.

    f1(x) = c_kappa * (sum_i |x_i - s_i|^kappa + c2)  for x_1 <= 4a,
            f0(x)                                     for x_1 >  4a,

    with shift s = (2a, 0, ..., 0) and c2 = (4a)^kappa - (2a)^kappa
    chosen so the two pieces agree on the seam x_1 = 4a.  Minimizer
    (2a, 0, ..., 0), minimum c_kappa * c2.  Along coordinate 1 the left
    piece's derivative at the seam, kappa*c*(2a)^{kappa-1}, is below the
    right piece's kappa*c*(4a)^{kappa-1}: a convex kink.  Subgradients
    at the seam use the right limit.
    """

    kind = "f1"

    def __init__(self, kappa, d, a):
        base = PowerSum(kappa, d)
        a = float(a)
        if a <= 0:
            raise ValueError(f"offset a must be positive, got {a}")
        if 4 * a > 1.0:
            raise ValueError("need 4a <= 1 so the seam lies inside the domain")
        self.kappa = base.kappa
        self.d = base.d
        self.c_kappa = base.c_kappa
        self.lambda_growth = base.lambda_growth
        # Shifting coordinate 1 raises the gradient sup on the domain:
        # at x = (0, 1, 0, ...) the first component contributes
        # |0 - 2a|^{kappa-1} on top of f0's sup configuration, so the
        # certified constant is sqrt(S + (2a)^{2kappa-2}) with S the
        # squared sup of the unshifted coordinates.  It tends to f0's
        # constant as a -> 0.  (Maximizing coordinate 1 at x_1 = 0 and
        # the rest on the sphere is optimal: over the seam region the
        # first term is largest at x_1 = 0, and beyond the seam the
        # function is f0 itself.)
        p = 2.0 * kappa - 2.0
        if d == 1:
            rest = 0.0
        else:
            rest = 1.0 if kappa >= 2.0 else (d - 1) ** (2.0 - kappa)
        sup_f0_sq = 1.0 if kappa >= 2.0 else d ** (2.0 - kappa)
        shifted_sq = max(sup_f0_sq, (2 * a) ** p + rest)
        self.lipschitz = kappa * base.c_kappa * math.sqrt(shifted_sq)
        self.a = a
        self.c2 = (4 * a) ** kappa - (2 * a) ** kappa
        self.x_star = np.zeros(base.d)
        self.x_star[0] = 2 * a
        self.f_star = base.c_kappa * self.c2
        self.domain = base.domain
        self._f0 = base
        self._shift = self.x_star.copy()

    def _value_raw(self, x):
        low = self.c_kappa * (
            np.sum(np.abs(x - self._shift) ** self.kappa, axis=-1) + self.c2)
        return np.where(x[..., 0] <= 4 * self.a, low, self._f0._value_raw(x))

    def _subgrad_raw(self, x):
        glow = self.kappa * self.c_kappa * _signed_power(
            x - self._shift, self.kappa - 1.0)
        ghigh = self._f0._subgrad_raw(x)
        return np.where((x[..., 0] < 4 * self.a)[..., None], glow, ghigh)


class QuadLinearHybrid(KappaFunction):
    """1-D: 2x^2 on |x| <= 1/4, |x| - 1/8 beyond, on [-1/2, 1/2].

    The pieces join with matching value and slope at |x| = 1/4, so the
    function is C^1 on its whole domain.  It has
    quadratic growth with constant 1.5 (attained at the endpoints,
    where (|x| - 1/8) / x^2 bottoms out) yet is not strongly convex:
    the outer pieces are affine.
    """

    kind = "hybrid"

    def __init__(self):
        self.kappa = 2.0
        self.d = 1
        self.c_kappa = 2.0
        # min over the linear piece of (|x| - 1/8)/x^2, attained at
        # |x| = 1/2: (1/2 - 1/8)/(1/4) = 3/2.  See the zoo tests for the
        # grid-search certification of this value.
        self.lambda_growth = 1.5
        self.lipschitz = 1.0
        self.x_star = np.zeros(1)
        self.f_star = 0.0
        self.domain = Box([-0.5], [0.5])

    def _value_raw(self, x):
        ax = np.abs(x[..., 0])
        return np.where(ax <= 0.25, 2.0 * x[..., 0] ** 2, ax - 0.125)

    def _subgrad_raw(self, x):
        inner = np.abs(x[..., 0]) <= 0.25
        return np.where(inner[..., None], 4.0 * x, np.sign(x))


def make_f0(kappa, d):
    """Power-sum function minimized at the origin; see PowerSum."""
    return PowerSum(kappa, d)


def make_f1(kappa, d, a):
    """Shifted partner of f0 with minimizer (2a, 0, ..., 0); see ShiftedPowerSum."""
    return ShiftedPowerSum(kappa, d, a)


def make_hybrid():
    """Quadratic-to-linear 1-D function; see QuadLinearHybrid."""
    return QuadLinearHybrid()


def make_function(fid, **params):
    """Zoo lookup by config id: "f0", "f1", or "hybrid"."""
    if fid == "f0":
        return make_f0(params["kappa"], params["d"])
    if fid == "f1":
        return make_f1(params["kappa"], params["d"], params["a"])
    if fid == "hybrid":
        return make_hybrid()
    raise ValueError(f"unknown function id {fid!r}; known: {FUNCTION_IDS}")


def evaluate(f, x):
    """Noiseless value of f at x (ground truth the oracles perturb)."""
    return f(x)


def subgrad(f, x):
    """A valid subgradient of f at x; right limits at kinks."""
    return f.subgrad(x)
