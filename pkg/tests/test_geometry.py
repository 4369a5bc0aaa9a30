"""Projection tests: closed forms, Dykstra, and independent oracles.

Two independent routes certify each projection: a brute-force feasible
grid (global guard: nothing on the lattice beats the returned point)
and an SLSQP solve of min ||y - x||^2 under the same constraints
(local certificate at the pinned tolerances).  A grid alone cannot
reach 1e-8 agreement: at a curved boundary the nearest feasible grid
point sits ~step inside, a first-order distance penalty.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import NonlinearConstraint, minimize

from growthopt.geometry import (Ball, Box, Intersection, contains,
                                default_domain, project, project_epoch)


def grid_search_distance(feasible, x, lo, hi, step, chunk=64):
    """Smallest ||y - x|| over feasible grid points, brute force.

    feasible: callable mapping (..., d) points to a boolean mask.
    lo/hi: per-coordinate bounds of the search grid.
    """
    x = np.asarray(x, dtype=float)
    d = x.shape[0]
    axes = [np.arange(lo[i], hi[i] + 0.5 * step, step) for i in range(d)]
    best = np.inf
    best_pt = None
    # Chunk along the first axis to bound memory.
    for start in range(0, len(axes[0]), chunk):
        a0 = axes[0][start:start + chunk]
        mesh = np.meshgrid(a0, *axes[1:], indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=-1)
        mask = feasible(pts)
        if not np.any(mask):
            continue
        pts = pts[mask]
        dist = np.sqrt(np.sum((pts - x) ** 2, axis=-1))
        k = np.argmin(dist)
        if dist[k] < best:
            best = float(dist[k])
            best_pt = pts[k]
    assert best_pt is not None, "grid search found no feasible point"
    return best, best_pt


def slsqp_distance(balls, x, starts):
    """min ||y - x|| over [0,1]^d ∩ (∩ balls) via SLSQP, multistart."""
    x = np.asarray(x, dtype=float)
    d = x.shape[0]
    cons = [NonlinearConstraint(
        lambda y, c=np.asarray(c, float), r=float(r):
            r ** 2 - np.sum((y - c) ** 2), 0.0, np.inf)
        for c, r in balls]
    best = np.inf
    for y0 in starts:
        res = minimize(lambda y: 0.5 * np.sum((y - x) ** 2),
                       np.clip(y0, 0.0, 1.0),
                       jac=lambda y: y - x,
                       bounds=[(0.0, 1.0)] * d,
                       constraints=cons, method="SLSQP",
                       options={"ftol": 1e-16, "maxiter": 500})
        ok = all(np.sum((res.x - np.asarray(c, float)) ** 2) <= r ** 2 + 1e-12
                 for c, r in balls)
        if ok and np.all(res.x >= -1e-12) and np.all(res.x <= 1 + 1e-12):
            best = min(best, float(np.sqrt(np.sum((res.x - x) ** 2))))
    assert np.isfinite(best), "SLSQP found no feasible solution"
    return best


# ---------------------------------------------------------------- contains

def test_contains_ball_examples():
    ball = Ball(np.zeros(2), 1.0)
    assert contains(ball, np.zeros(2))
    assert not contains(ball, np.array([1.1, 0.0]))


def test_contains_intersection_corner():
    # (0.9, 0.9) is inside the box but ||x|| = 0.9*sqrt(2) > 1.
    dom = default_domain(2)
    assert not contains(dom, np.array([0.9, 0.9]))
    assert contains(dom, np.array([0.5, 0.5]))


def test_contains_dimension_mismatch():
    with pytest.raises(ValueError):
        contains(Ball(np.zeros(2), 1.0), np.zeros(3))
    with pytest.raises(ValueError):
        project(Box(np.zeros(2), np.ones(2)), np.zeros(4))


def test_degenerate_domains_rejected():
    with pytest.raises(ValueError):
        Ball(np.zeros(2), 0.0)
    with pytest.raises(ValueError):
        Box(np.ones(2), np.zeros(2))
    with pytest.raises(ValueError):
        # Ball around the origin with radius 1 cannot meet a box at distance 5.
        Intersection(Ball(np.zeros(2), 1.0), Box(5 * np.ones(2), 6 * np.ones(2)))


# ----------------------------------------------------------------- project

def test_project_ball_radial():
    ball = Ball(np.zeros(2), 1.0)
    np.testing.assert_allclose(project(ball, np.array([2.0, 0.0])),
                               np.array([1.0, 0.0]), atol=1e-12)


def test_project_identity_inside():
    for dom in (Ball(np.zeros(3), 1.0),
                Box(np.zeros(3), np.ones(3)),
                default_domain(3)):
        x = np.full(3, 0.3)
        np.testing.assert_allclose(project(dom, x), x, atol=1e-10)


def test_project_intersection_matches_oracles_2d():
    # Dense full-grid guard at step 1e-4 over [0,1]^2, then the SLSQP
    # route pins the value to 1e-8.
    dom = default_domain(2)
    x = np.array([1.5, 1.5])
    p = project(dom, x)
    assert np.all(contains(dom, p))
    grid_dist, grid_pt = grid_search_distance(
        lambda pts: dom.contains(pts, tol=0.0), x,
        lo=[0.0, 0.0], hi=[1.0, 1.0], step=1e-4)
    d_code = np.sqrt(np.sum((p - x) ** 2))
    assert d_code <= grid_dist + 1e-9, "projection beaten by a grid point"
    oracle_dist = slsqp_distance([(np.zeros(2), 1.0)], x,
                                 starts=[grid_pt, x, np.full(2, 0.5)])
    assert abs(oracle_dist - d_code) <= 1e-8, (
        f"projection off by {oracle_dist - d_code:.2e} vs SLSQP oracle")


def test_project_batched_rows_match_single():
    dom = default_domain(2)
    rng = np.random.default_rng(7)
    X = rng.uniform(-1.5, 2.0, size=(40, 2))
    batch = project(dom, X)
    for i in range(len(X)):
        single = project(dom, X[i])
        np.testing.assert_array_equal(batch[i], single)


# ----------------------------------------------------------- project_epoch

def test_project_epoch_nested_balls():
    dom = Ball(np.zeros(2), 1.0)
    p = project_epoch(dom, np.zeros(2), 0.5, np.array([2.0, 0.0]))
    np.testing.assert_allclose(p, np.array([0.5, 0.0]), atol=1e-9)


def test_project_epoch_identity_inside():
    dom = default_domain(2)
    x = np.array([0.2, 0.1])
    np.testing.assert_array_equal(project_epoch(dom, np.zeros(2), 0.5, x), x)


def test_project_epoch_rejects_bad_args():
    dom = default_domain(2)
    with pytest.raises(ValueError):
        project_epoch(dom, np.zeros(2), -1.0, np.ones(2))
    with pytest.raises(ValueError):
        project_epoch(dom, np.array([3.0, 3.0]), 0.5, np.ones(2))


def _epoch_feasible(dom, center, radius):
    cap = Ball(center, radius)
    return lambda pts: np.logical_and(dom.contains(pts, tol=0.0),
                                      cap.contains(pts, tol=0.0))


def test_project_epoch_grid_agreement_2d():
    rng = np.random.default_rng(11)
    dom = default_domain(2)
    for _ in range(5):
        center = project(dom, rng.uniform(0, 0.6, size=2))
        radius = rng.uniform(0.2, 0.6)
        x = rng.uniform(-1.0, 2.0, size=2)
        p = project_epoch(dom, center, radius, x)
        cap = Ball(center, radius)
        assert np.all(dom.contains(p)) and np.all(cap.contains(p))
        grid_dist, grid_pt = grid_search_distance(
            _epoch_feasible(dom, center, radius), x,
            lo=[0.0, 0.0], hi=[1.0, 1.0], step=2e-3)
        d_code = np.sqrt(np.sum((p - x) ** 2))
        assert d_code <= grid_dist + 1e-9
        oracle_dist = slsqp_distance(
            [(np.zeros(2), 1.0), (center, radius)], x,
            starts=[grid_pt, x, center])
        assert abs(oracle_dist - d_code) <= 1e-6


def test_project_epoch_grid_agreement_3d():
    rng = np.random.default_rng(13)
    dom = default_domain(3)
    for _ in range(3):
        center = project(dom, rng.uniform(0, 0.5, size=3))
        radius = rng.uniform(0.25, 0.5)
        x = rng.uniform(0.8, 1.8, size=3)
        p = project_epoch(dom, center, radius, x)
        cap = Ball(center, radius)
        assert np.all(dom.contains(p)) and np.all(cap.contains(p))
        grid_dist, grid_pt = grid_search_distance(
            _epoch_feasible(dom, center, radius), x,
            lo=[0.0] * 3, hi=[1.0] * 3, step=1.5e-2)
        d_code = np.sqrt(np.sum((p - x) ** 2))
        assert d_code <= grid_dist + 1e-9
        oracle_dist = slsqp_distance(
            [(np.zeros(3), 1.0), (center, radius)], x,
            starts=[grid_pt, x, center])
        assert abs(oracle_dist - d_code) <= 1e-6


# ------------------------------------------------------ invariant properties

coords = st.floats(min_value=-3.0, max_value=3.0,
                   allow_nan=False, allow_infinity=False)


@settings(max_examples=200, deadline=None)
@given(st.lists(coords, min_size=2, max_size=2).map(np.array))
def test_projection_idempotent_2d(x):
    dom = default_domain(2)
    p = project(dom, x)
    q = project(dom, p)
    assert np.max(np.abs(p - q)) <= 1e-10, f"not idempotent at {x}"
    assert np.all(contains(dom, p))


@settings(max_examples=200, deadline=None)
@given(st.lists(coords, min_size=3, max_size=3).map(np.array),
       st.lists(coords, min_size=3, max_size=3).map(np.array))
def test_projection_nonexpansive_3d(x, y):
    dom = default_domain(3)
    px, py = project(dom, x), project(dom, y)
    assert (np.sqrt(np.sum((px - py) ** 2))
            <= np.sqrt(np.sum((x - y) ** 2)) + 1e-10)


@settings(max_examples=100, deadline=None)
@given(st.lists(coords, min_size=2, max_size=2).map(np.array))
def test_epoch_projection_feasible(x):
    dom = default_domain(2)
    center = np.array([0.3, 0.3])
    p = project_epoch(dom, center, 0.25, x)
    assert np.all(contains(dom, p))
    assert np.sqrt(np.sum((p - center) ** 2)) <= 0.25 + 1e-9
