"""Epoch-doubling projected subgradient descent under kappa-growth.

The scheme runs projected subgradient descent in epochs: epoch e takes
T_e steps with constant step size eta_e inside a trust ball of radius
R_e around the epoch's starting point, then restarts from the average
iterate with T doubled, eta shrunk by 2^(-kappa/(2*kappa-2)), and the
trust radius recomputed.  Under the growth condition

    f(x) - f(x*) >= lam * ||x - x*||^kappa,

the growth inequality converts each epoch's function-error bound into
a distance bound, which is exactly the next trust radius, so the
minimizer stays inside every trust ball with high probability and the
error contracts geometrically per epoch.

All schedule constants are forced by four per-epoch requirements
(R1-R4 below); compute_constants evaluates every one of them
numerically at construction time rather than trusting the algebra.
"""

from __future__ import annotations

import math

import numpy as np

from .geometry import _dykstra
from .oracle import BudgetExhausted, _noisy_response

#: relative slack for the construction-time requirement checks; the
#: constants satisfy R1-R4 with equality in places, so exact float
#: comparisons would be brittle.
_REQ_RTOL = 1e-9

_SLAB = 4096


class EpochSchedule:
    """Frozen step/radius/length schedule for one run.

    Attributes
    ----------
    kappa, lam, G, delta, T : problem parameters as given
    C0, C1, C2 : the driving constants
    E : int            number of epochs that fit in the budget T
    E_nominal : int    epoch count from the fixed-point formula; enters
                       C0 = 288*ln(E_nominal/delta) and delta_tilde
    T_e : int array    per-epoch step counts, T_e = ceil(C0)*2^e
    eta : float array  length E+1; eta[e] is the step of epoch e+1, and
                       the extra entry eta[E] prices the returned point
    R_e : float array  per-epoch trust radii (C2*eta_e/lam)^(1/kappa)
    """

    def __init__(self, kappa, lam, G, delta, T):
        kappa = float(kappa)
        lam = float(lam)
        G = float(G)
        delta = float(delta)
        T = int(T)
        if kappa <= 1:
            raise ValueError(f"kappa must exceed 1, got {kappa}")
        if lam <= 0 or G <= 0:
            raise ValueError("lam and G must be positive")
        if not 0 < delta < 1:
            raise ValueError(f"delta must lie in (0,1), got {delta}")
        if T < 1:
            raise ValueError("budget T must be >= 1")

        self.kappa = kappa
        self.lam = lam
        self.G = G
        self.delta = delta
        self.T = T

        q = kappa / (2 * kappa - 2)
        self.E_nominal = _epoch_count_fixed_point(T, delta)
        self.C0 = 288.0 * math.log(self.E_nominal / delta)
        self.C1 = (G ** ((2 - kappa) / (kappa - 1))
                   * 2.0 ** (kappa / (2 * (kappa - 1) ** 2))
                   / lam ** (1.0 / (kappa - 1)))
        self.C2 = G * G * 2.0 ** q

        base = math.ceil(self.C0)
        lengths = []
        used = 0
        while used + base * 2 ** (len(lengths) + 1) <= T:
            lengths.append(base * 2 ** (len(lengths) + 1))
            used += lengths[-1]
        if not lengths:
            raise ValueError(
                f"budget T={T} cannot fit one epoch of 2*ceil(C0)={2 * base} "
                f"steps (C0={self.C0:.1f}); increase T or delta")
        self.E = len(lengths)
        self.T_e = np.array(lengths, dtype=np.int64)
        self.eta = self.C1 * 2.0 ** (-q * np.arange(1, self.E + 2))
        self.R_e = (self.C2 * self.eta[:-1] / lam) ** (1.0 / kappa)
        self._check_requirements()

    @property
    def total_queries(self):
        return int(self.T_e.sum())

    @property
    def error_bound(self):
        """High-probability bound C2*eta_{E+1} on f(x_hat) - f*."""
        return self.C2 * self.eta[-1]

    def _check_requirements(self):
        kappa, lam, G = self.kappa, self.lam, self.G

        def holds(lhs, rhs):
            return lhs <= rhs * (1 + _REQ_RTOL)

        # R1: worst-case initial error M fits under C2*eta_1.
        M = (G ** kappa / lam) ** (1.0 / (kappa - 1))
        if not holds(M * 2.0 ** (kappa / (2 * (kappa - 1) ** 2)),
                     self.C2 * self.eta[0]):
            raise AssertionError("R1 violated: C2*eta_1 below the initial-error bound")
        delta_tilde = self.delta / self.E_nominal
        for e in range(self.E):
            eta_e = self.eta[e]
            T_e = self.T_e[e]
            # R2: the distance term of the epoch bound is <= eta*G^2/6.
            lhs2 = (self.C2 ** (2 / kappa) * eta_e ** (2 / kappa)
                    / (2 * eta_e * T_e * lam ** (2 / kappa)))
            if not holds(lhs2, eta_e * G * G / 6):
                raise AssertionError(f"R2 violated at epoch {e + 1}")
            # R3: the deviation term is <= eta*G^2/3.
            lhs3 = (4 * G * (self.C2 * eta_e / lam) ** (1 / kappa)
                    * math.sqrt(2 * math.log(1 / delta_tilde))
                    / math.sqrt(T_e))
            if not holds(lhs3, eta_e * G * G / 3):
                raise AssertionError(f"R3 violated at epoch {e + 1}")
            # R4: the post-epoch bound eta_e*G^2 re-enters as C2*eta_{e+1}.
            if not holds(eta_e * G * G, self.C2 * self.eta[e + 1]):
                raise AssertionError(f"R4 violated at epoch {e + 1}")
        if self.R_e.size > 1 and not np.all(np.diff(self.R_e) < 0):
            raise AssertionError("trust radii must strictly decrease")

    def __repr__(self):
        return (f"EpochSchedule(kappa={self.kappa}, lam={self.lam:.6g}, "
                f"G={self.G:.6g}, delta={self.delta}, T={self.T}, "
                f"E={self.E}, C0={self.C0:.2f})")


def _epoch_count_fixed_point(T, delta, max_rounds=64):
    """Solve E = floor(log2(T/C0 + 1)) with C0 = 288*ln(E/delta).

    Plain iteration from E = 1 almost always converges in a few steps;
    when it 2-cycles (large delta, small T) fall back to the largest
    self-consistent E, which is deterministic and unique because the
    right-hand side is decreasing in E.
    """
    E = 1
    seen = set()
    for _ in range(max_rounds):
        C0 = 288.0 * math.log(E / delta)
        E_next = max(1, math.floor(math.log2(T / C0 + 1.0)))
        if E_next == E:
            return E
        if E_next in seen:
            break
        seen.add(E)
        E = E_next
    best = 1
    for cand in range(1, 64):
        C0 = 288.0 * math.log(cand / delta)
        if cand <= math.floor(math.log2(T / C0 + 1.0)):
            best = cand
    return best


def compute_constants(kappa, lam, G, delta, T):
    """Schedule with the forced constants; every requirement re-checked."""
    return EpochSchedule(kappa, lam, G, delta, T)


class RunResult:
    """Outcome of one run: the returned point and its true errors."""

    __slots__ = ("x_hat", "f_error", "point_error", "queries_used", "trace")

    def __init__(self, x_hat, f_error, point_error, queries_used, trace):
        self.x_hat = x_hat
        self.f_error = f_error
        self.point_error = point_error
        self.queries_used = queries_used
        # trace: list of (epoch start point, trust radius) pairs
        self.trace = trace

    def __repr__(self):
        return (f"RunResult(f_error={self.f_error:.3e}, "
                f"point_error={self.point_error:.3e}, "
                f"queries_used={self.queries_used})")


def _project_rows(domain, centers, radius, x):
    """Row-wise projection onto domain ∩ B(centers[i], radius).

    Same arithmetic as geometry.project_epoch, except each row carries
    its own trust-ball center (concurrent trials restart from their own
    epoch averages).  Rows already feasible pass through untouched.
    """
    delta = x - centers
    dist = np.sqrt(np.sum(delta * delta, axis=-1))
    inside = np.logical_and(np.asarray(domain.contains(x)),
                            dist <= radius + 1e-9)
    if np.all(inside):
        return x
    todo = ~inside
    sub_centers = centers[todo]

    def cap_project(y):
        d = y - sub_centers
        dn = np.sqrt(np.sum(d * d, axis=-1))[..., None]
        scale = np.where(dn > radius, np.divide(
            radius, dn, out=np.ones_like(dn), where=dn > 0), 1.0)
        return sub_centers + d * scale

    out = np.array(x, copy=True)
    out[todo] = _dykstra(domain._projectors() + [cap_project], x[todo])
    return out


def run_many(oracles, domain, schedule, x_init=None):
    """Run the epoch scheme once per oracle, all trials in lockstep.

    Every oracle must wrap the same function with the same noise
    configuration; each keeps its own seed, noise stream, and budget,
    so results are identical to running the trials one at a time (the
    per-query noise is a pure function of (seed, query index)).
    Returns one RunResult per oracle, in order.
    """
    if not oracles:
        return []
    f = oracles[0].f
    for o in oracles:
        if o.f is not f:
            raise ValueError("all oracles in a batch must share one function")
        if o.order != "first":
            raise ValueError("the epoch scheme needs gradient responses")
        if (o.sigma, o.noise_model, o.clip_G) != (
                oracles[0].sigma, oracles[0].noise_model, oracles[0].clip_G):
            raise ValueError("oracle noise configs differ within a batch")
        if o.grad_bound is None or o.grad_bound > schedule.G * (1 + 1e-12):
            raise ValueError(
                f"oracle gradient bound {o.grad_bound} exceeds schedule G="
                f"{schedule.G}; the schedule's guarantees assume ||g_hat|| <= G")
        if o.queries_remaining < schedule.total_queries:
            raise BudgetExhausted(
                f"schedule needs {schedule.total_queries} queries, oracle has "
                f"{o.queries_remaining}")
    n = len(oracles)
    sigma = oracles[0].sigma
    model = oracles[0].noise_model
    clip = oracles[0].clip_G

    if x_init is None:
        x_init = domain.center_point()
    x_init = np.asarray(x_init, dtype=float)
    if not np.all(domain.contains(x_init)):
        raise ValueError("x_init must lie in the domain")

    starts = np.tile(x_init, (n, 1))
    traces = [[] for _ in range(n)]
    for e in range(schedule.E):
        eta_e = schedule.eta[e]
        R_e = schedule.R_e[e]
        T_e = int(schedule.T_e[e])
        for i in range(n):
            traces[i].append((starts[i].copy(), float(R_e)))
        x = starts
        sums = np.zeros_like(starts)
        done = 0
        while done < T_e:
            take = min(_SLAB, T_e - done)
            noise = np.stack([o._noise_rows(take) for o in oracles])
            for s in range(take):
                sums += x
                _, ghat = _noisy_response(f, x, noise[:, s, :], sigma,
                                          "first", model, clip)
                x = _project_rows(domain, starts, R_e, x - eta_e * ghat)
            done += take
        starts = sums / T_e

    x_star = f.x_star
    values = f(starts)
    results = []
    for i in range(n):
        f_err = float(values[i] - f.f_star)
        p_err = float(np.sqrt(np.sum((starts[i] - x_star) ** 2)))
        # growth certificate converts function error to point error
        assert p_err <= (max(f_err, 0.0) / f.lambda_growth) ** (1 / f.kappa) + 1e-9, \
            "growth certificate violated by a run output"
        results.append(RunResult(starts[i].copy(), f_err, p_err,
                                 schedule.total_queries, traces[i]))
    return results


def run(oracle, domain, schedule, x_init=None):
    """Single-trial entry point; see run_many."""
    return run_many([oracle], domain, schedule, x_init)[0]
