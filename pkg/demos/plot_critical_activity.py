"""
Where the two-periodic laws disappear
=====================================

The scalar map h(x) = alpha (1 + 1/x)^k has one fixed point xi.  Strict
two-cycles branch off it while |h'(xi)| > 1 and vanish at a critical
activity.  Below we compare the closed-form value with a purely numerical
search for the fold.
"""

import numpy as np

from wandgibbs import critical, solvers

###############################################################################
# Formula against the numerical fold

for k in range(2, 7):
    exact = critical.lambda_critical(k)
    fold = critical.numeric_fold_detection(k)
    print(f"k={k}  lambda_cr={exact:<12.8f} fold={fold:<12.8f} rel.err={abs(fold - exact) / exact:.1e}")

###############################################################################
# Watching the cycle shrink at k = 3.  The gap z0 - t0 closes like a square
# root of the distance to the critical activity.

lam_cr = critical.lambda_critical(3)
for eps in np.geomspace(1e-1, 1e-8, 8):
    z0, t0 = solvers.two_cycles(3, lam_cr * (1 - eps))[0][0]
    print(f"1 - lam/lam_cr = {eps:.0e}   z0 - t0 = {z0 - t0:.3e}   ratio to sqrt = {(z0 - t0) / np.sqrt(eps):.4f}")

###############################################################################
# Solution counts on t1 = t2, z1 = z2 either side of the fold

for lam in (0.5 * lam_cr, 0.99 * lam_cr, lam_cr, 1.5 * lam_cr):
    print(f"lambda={lam:.4f}: {critical.count_solutions_on_I2(3, lam)} solutions")
