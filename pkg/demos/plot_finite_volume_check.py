"""
Boundary laws on a finite tree
==============================

A boundary law solving the period-2 equations makes the finite-volume
measures on nested balls consistent.  We check this by brute force on the
binary Cayley tree of depth 2 and then compare the tree-indexed chain
sampler with the exact marginals.
"""

import numpy as np

from wandgibbs import oracle, solvers
from wandgibbs.model import FiniteTree, count_admissible
from wandgibbs.recursion import PeriodicState

lam = 0.75
z, t = solvers.closed_form_k2(lam)
law = PeriodicState.two_cycle(z, t)
tree = FiniteTree(2, 2)
print(f"{count_admissible(tree)} admissible configurations on {tree.n_vertices} vertices")

###############################################################################
# Solved law against a perturbed one

print("solved   :", oracle.consistency_residual(tree, lam, law).max_abs)
print("perturbed:", oracle.consistency_residual(tree, lam, PeriodicState(2, 2, 0.5, 0.5)).max_abs)

###############################################################################
# Monte Carlo on a deeper tree, restricted to the first three levels

exact = oracle.exact_table(oracle.build_measure(tree, lam, law)).probability
mc = oracle.sample_chain(2, 4, z, t, oracle.root_law(2, lam, law), reps=200_000, seed=1)
np.set_printoptions(precision=5, suppress=True)
print("exact level marginals\n", exact)
print("sampled\n", mc.probability[:3])
print("z-scores\n", np.abs(mc.probability[:3] - exact) / mc.stderr[:3])
