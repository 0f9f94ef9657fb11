"""
Bifurcation curves at k = 3
===========================

Along the two-cycle branch the cube root of the activity is phi(x), with
x the cube root of the larger boundary value.  Translation-invariant laws
follow a second curve psi(x).  This script writes both cubed curves to a
CSV file for plotting and reports the maximum of phi and the crossings.
"""

import sys

from wandgibbs import critical
from wandgibbs.serialize import to_csv

data = critical.curve_samples(0.05, 10.0, 2000)

x_max, phi_max = critical.find_phi_maximum()
print(f"phi peaks at x = {x_max:.12f} (cube root of 2 = {2 ** (1 / 3):.12f})")
print(f"peak activity phi^3 = {phi_max ** 3:.12f} (128/27 = {128 / 27:.12f})")

###############################################################################
# The two curves meet twice.  With the as-printed variant of psi the
# crossings move far from these values.

for variant in ("corrected", "as_printed"):
    roots = critical.find_curve_intersections(variant)
    print(variant, ["%.10f" % r for r in roots])

###############################################################################
# Optional CSV dump: python plot_k3_curves.py curves.csv

if len(sys.argv) > 1:
    with open(sys.argv[1], "w", newline="") as fh:
        fh.write(to_csv(["x", "phi_cubed", "psi_cubed"],
                        zip(data["x"], data["phi_cubed"], data["psi_cubed"])))
    print("wrote", sys.argv[1])
