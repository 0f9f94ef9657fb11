"""
Extremality of the two-periodic measures
========================================

Every other level of the tree carries a Markov chain with kernel P_z P_t.
Its second eigenvalue feeds the Kesten-Stigum test for non-extremality;
its Dobrushin-type coefficient kappa feeds a sufficient condition for
extremality.  At k = 2 we sweep the whole existence range.
"""

import numpy as np

from wandgibbs import extremality

print(f"{'lambda':>7} {'z':>10} {'t':>10} {'k^2 s2^2':>10} {'k^2 kappa^2':>12} verdict")
for lam in np.linspace(0.05, 0.95, 10):
    mu1, _ = extremality.analyze(2, lam)
    print(f"{lam:7.3f} {mu1.z:10.5f} {mu1.t:10.5f} {mu1.ks_value:10.6f} {mu1.msw_value:12.6f} {mu1.verdict.value}")

###############################################################################
# At k = 3 the product z t is no longer 1 and the kappa bound carries no
# theorem, so the verdict rests on Kesten-Stigum alone.

for lam in (1.0, 3.0, 4.0, 4.7):
    for r in extremality.analyze(3, lam)[:1]:
        print(f"k=3 lambda={lam}: zt={r.z * r.t:.4f} ks={r.ks_value:.4f} msw={r.msw_value:.4f} -> {r.verdict.value}")
