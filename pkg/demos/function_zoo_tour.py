"""Tour of the test-function zoo and the projection toolkit.

Builds each zoo member, prints its certified constants, then spot
checks the certificates numerically: growth from below, gradient
norms from above, and (for the hybrid) the missing strong convexity
that keeps it out of the quadratic-growth-by-curvature club.  Ends
with the feasible-set toolkit, including an epoch-cap projection that
needs all three sets at once.
"""

import numpy as np

from growthopt import (default_domain, make_f0, make_f1, make_hybrid,
                       project, project_epoch)

rng = np.random.default_rng(7)

print("=== certified constants ===")
zoo = [
    ("f0(kappa=1.5, d=2)", make_f0(1.5, 2)),
    ("f0(kappa=2,   d=2)", make_f0(2.0, 2)),
    ("f0(kappa=3,   d=3)", make_f0(3.0, 3)),
    ("f1(kappa=2,   d=2, a=0.1)", make_f1(2.0, 2, a=0.1)),
    ("hybrid", make_hybrid()),
]
for name, f in zoo:
    print(f"{name:28s} lambda={f.lambda_growth:.4f} "
          f"lipschitz={f.lipschitz:.4f} f*={f.f_star:.4f} "
          f"x*={np.round(f.x_star, 3)}")

print()
print("=== certificates, sampled ===")
for name, f in zoo:
    d = f.d
    if name == "hybrid":
        x = rng.uniform(-0.5, 0.5, (4000, d))
    else:
        x = rng.random((4000, d))
        x /= np.maximum(1.0, np.sqrt(np.sum(x * x, axis=1)))[:, None]
    r = np.sqrt(np.sum((x - f.x_star) ** 2, axis=1))
    growth_slack = (f._value_raw(x) - f.f_star
                    - f.lambda_growth * r ** f.kappa)
    gnorm = np.sqrt(np.sum(f._subgrad_raw(x) ** 2, axis=1))
    print(f"{name:28s} min growth slack {growth_slack.min():+.2e}  "
          f"max ||g|| {gnorm.max():.4f} (cert {f.lipschitz:.4f})")

print()
print("=== hybrid: quadratic growth without strong convexity ===")
h = make_hybrid()
xs = rng.uniform(0.25, 0.5, (2000, 1))
ys = rng.uniform(0.25, 0.5, (2000, 1))
t = rng.random((2000, 1))
gap = (t[:, 0] * h._value_raw(xs) + (1 - t[:, 0]) * h._value_raw(ys)
       - h._value_raw(t * xs + (1 - t) * ys))
need = 0.5 * h.lambda_growth * t[:, 0] * (1 - t[:, 0]) \
    * (xs[:, 0] - ys[:, 0]) ** 2
print(f"strong-convexity violations on the linear piece: "
      f"{int(np.sum(gap < need))}/2000 (growth still certified above)")

print()
print("=== projections ===")
dom = default_domain(2)
outside = np.array([1.4, -0.3])
p = project(dom, outside)
print(f"project {outside} onto ball-and-box -> {np.round(p, 6)}")
# an epoch cap adds a ball around the current center; the projection
# must satisfy all three constraints simultaneously
center = np.array([0.6, 0.2])
q = project_epoch(dom, center, 0.25, outside)
print(f"with epoch cap B({center}, 0.25)   -> {np.round(q, 6)}")
print(f"  in domain: {dom.contains(q)}, "
      f"dist to center: {np.sqrt(np.sum((q - center) ** 2)):.6f}")
