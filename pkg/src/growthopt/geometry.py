"""Convex feasible sets and Euclidean projections.

Three set kinds cover every experiment in this package: a ball, an
axis-aligned box, and the intersection of the two (the default domain
[0,1]^d ∩ unit ball).  Ball and box have closed-form projections;
intersections are handled by Dykstra's alternating-projection scheme,
which converges for any finite family of closed convex sets.

All operations accept arrays of shape (..., d) and act on the last
axis, so a batch of points (one row per concurrent trial) goes through
exactly the same arithmetic as a single point.
"""

from __future__ import annotations

import numpy as np

# Membership tolerance: absorbs projection round-off so that
# contains(project(x)) is always true.
TOL_GEOM = 1e-9

# Dykstra iteration control.
DYKSTRA_TOL = 1e-10
DYKSTRA_MAX_ITER = 10_000


def _norm(x, axis=-1):
    # sqrt(sum(x^2)) written out so batched and single points share the
    # exact floating-point reduction order.
    return np.sqrt(np.sum(x * x, axis=axis))


class Ball:
    """Euclidean ball {x : ||x - center|| <= radius}."""

    def __init__(self, center, radius):
        self.center = np.atleast_1d(np.asarray(center, dtype=float))
        self.radius = float(radius)
        if self.center.ndim != 1:
            raise ValueError("center must be a vector")
        if not np.all(np.isfinite(self.center)):
            raise ValueError("center must be finite")
        if not self.radius > 0:
            raise ValueError(f"radius must be positive, got {radius}")
        self.dim = self.center.shape[0]

    def contains(self, x, tol=TOL_GEOM):
        x = _check_dim(self, x)
        return _norm(x - self.center) <= self.radius + tol

    def project(self, x):
        x = _check_dim(self, x)
        delta = x - self.center
        dist = _norm(delta, axis=-1)[..., None]
        # scale = min(1, r/dist), with dist = 0 mapping to scale 1
        scale = np.where(dist > self.radius, np.divide(
            self.radius, dist, out=np.ones_like(dist), where=dist > 0), 1.0)
        return self.center + delta * scale

    def center_point(self):
        return self.center.copy()

    def diameter_bound(self):
        return 2.0 * self.radius

    def _projectors(self):
        return [self.project]

    def __repr__(self):
        return f"Ball(center={self.center!r}, radius={self.radius!r})"


class Box:
    """Axis-aligned box {x : lower <= x <= upper} (componentwise)."""

    def __init__(self, lower, upper):
        self.lower = np.atleast_1d(np.asarray(lower, dtype=float))
        self.upper = np.atleast_1d(np.asarray(upper, dtype=float))
        if self.lower.shape != self.upper.shape or self.lower.ndim != 1:
            raise ValueError("lower/upper must be vectors of equal length")
        if not np.all(self.lower <= self.upper):
            raise ValueError("need lower <= upper componentwise")
        self.dim = self.lower.shape[0]

    def contains(self, x, tol=TOL_GEOM):
        x = _check_dim(self, x)
        return np.logical_and(
            np.all(x >= self.lower - tol, axis=-1),
            np.all(x <= self.upper + tol, axis=-1))

    def project(self, x):
        x = _check_dim(self, x)
        return np.clip(x, self.lower, self.upper)

    def center_point(self):
        return 0.5 * (self.lower + self.upper)

    def diameter_bound(self):
        return float(_norm(self.upper - self.lower))

    def _projectors(self):
        return [self.project]

    def __repr__(self):
        return f"Box(lower={self.lower!r}, upper={self.upper!r})"


class Intersection:
    """Intersection of a ball and a box, projected via Dykstra."""

    def __init__(self, ball: Ball, box: Box):
        if ball.dim != box.dim:
            raise ValueError("ball and box dimensions differ")
        # Nonempty iff the box point nearest the ball center is inside
        # the ball; this test is exact for ball/box.
        nearest = box.project(ball.center)
        if _norm(nearest - ball.center) > ball.radius + TOL_GEOM:
            raise ValueError("ball and box do not intersect")
        self.ball = ball
        self.box = box
        self.dim = ball.dim

    def contains(self, x, tol=TOL_GEOM):
        return np.logical_and(self.ball.contains(x, tol),
                              self.box.contains(x, tol))

    def project(self, x):
        x = _check_dim(self, x)
        return _dykstra(self._projectors(), x)

    def center_point(self):
        return self.project(self.box.center_point())

    def diameter_bound(self):
        return min(self.ball.diameter_bound(), self.box.diameter_bound())

    def _projectors(self):
        return [self.ball.project, self.box.project]

    def __repr__(self):
        return f"Intersection({self.ball!r}, {self.box!r})"


def _check_dim(domain, x):
    x = np.asarray(x, dtype=float)
    if x.shape == () or x.shape[-1] != domain.dim:
        raise ValueError(
            f"point dimension {x.shape} does not match domain dim {domain.dim}")
    return x


def _dykstra(projectors, x, tol=DYKSTRA_TOL, max_iter=DYKSTRA_MAX_ITER):
    """Cyclic Dykstra over a list of exact projectors.

    Correction terms (one per set) make the limit the true Euclidean
    projection onto the intersection, not merely a feasible point.

    The point's per-cycle displacement alone is not a safe stopping
    test: the iterate can sit still for whole cycles while the
    corrections are still building (it then moves again later).  A row
    is treated as converged only when its point *and* every correction
    term are stable; at such a fixed point x - y is a sum of
    normal-cone directions at y, which certifies y as the projection.
    Converged rows are frozen, so each row's result is independent of
    what else shares the batch.
    """
    if len(projectors) == 1:
        return projectors[0](x)
    y = np.array(x, dtype=float, copy=True)
    corrections = [np.zeros_like(y) for _ in projectors]
    active = np.ones(y.shape[:-1], dtype=bool)
    for _ in range(max_iter):
        y_prev = y
        change = np.zeros(y.shape[:-1])
        for i, proj in enumerate(projectors):
            z = y + corrections[i]
            p = proj(z)
            new_corr = z - p
            if active.ndim:
                p = np.where(active[..., None], p, y)
                new_corr = np.where(active[..., None], new_corr,
                                    corrections[i])
            change = np.maximum(
                change, np.max(np.abs(new_corr - corrections[i]), axis=-1))
            corrections[i] = new_corr
            y = p
        change = np.maximum(change, np.max(np.abs(y - y_prev), axis=-1))
        active = np.logical_and(active, change > tol)
        if not np.any(active):
            return y
    raise RuntimeError(
        f"Dykstra did not converge within {max_iter} iterations "
        "(degenerate geometry?)")


def contains(domain, x, tol=TOL_GEOM):
    """True iff x lies in the domain within tolerance."""
    return domain.contains(x, tol)


def project(domain, x):
    """Euclidean projection of x onto the domain."""
    return domain.project(x)


def epoch_projector(domain, center, radius):
    """Reusable projector onto domain ∩ B(center, radius).

    This is the per-step feasible set of the epoch scheme: the base
    domain intersected with the current trust ball.  Points already
    inside everything pass through untouched (the common case on the
    hot path); the rest go to Dykstra over the exact projectors.
    Hoisting the construction out of the step loop saves rebuilding
    the cap ball tens of thousands of times per epoch.
    """
    if not float(radius) > 0:
        raise ValueError("epoch radius must be positive")
    center = np.asarray(center, dtype=float)
    if not np.all(domain.contains(center)):
        raise ValueError("epoch center must lie in the domain")
    cap = Ball(center, float(radius))
    projectors = domain._projectors() + [cap.project]

    def proj(x):
        x = _check_dim(domain, x)
        inside = np.logical_and(domain.contains(x), cap.contains(x))
        if np.all(inside):
            return x
        if x.ndim == 1:
            return _dykstra(projectors, x)
        out = np.array(x, copy=True)
        todo = ~inside
        out[todo] = _dykstra(projectors, x[todo])
        return out

    return proj


def project_epoch(domain, center, radius, x):
    """Projection of x onto domain ∩ B(center, radius)."""
    return epoch_projector(domain, center, radius)(x)


def default_domain(d):
    """The shared experiment domain: [0,1]^d intersected with the unit ball.

    Upper- and lower-bound experiments both run here.  Note its
    Euclidean diameter is sqrt(2) for d >= 2; the regime constants in
    the epoch scheme were derived under a diameter-1 normalization, so
    treat this set as the canonical example rather than a normalized one.
    """
    d = int(d)
    if d < 1:
        raise ValueError("dimension must be >= 1")
    return Intersection(Ball(np.zeros(d), 1.0), Box(np.zeros(d), np.ones(d)))
