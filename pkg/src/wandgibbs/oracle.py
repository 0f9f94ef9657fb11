"""Brute-force finite-volume measures on small trees and a tree-indexed chain sampler.

The boundary law handed to these functions is the solution of the
compatibility equations (the ``z'`` variables).  The finite-volume weight
of an admissible configuration on ``V_n`` is

    lam^{#occupied in V_{n-1}} * prod_{x in W_n} zt_{sigma(x)}(x),

with ``zt = (1, z1, z2)`` taken from the law of the leaf level.  This is
``lam^{#sigma} prod z_{sigma(x), x}`` with leaf fields ``z = z' / lam``.
Level ``m`` carries ``(z1, z2)`` of the law when ``m`` is even and
``(t1, t2)`` when ``m`` is odd.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from .errors import DomainError
from .extremality import kernel_from_law
from .model import WAND, FiniteTree, activity_vector, check_activity, enumerate_admissible
from .recursion import PeriodicState


def _tilde(law_pair) -> np.ndarray:
    return np.array([1.0, law_pair.z1, law_pair.z2])


@dataclass(frozen=True, eq=False)
class FiniteVolumeMeasure:
    tree: FiniteTree
    lam: float
    law: PeriodicState
    configs: np.ndarray = field(repr=False)
    log_weights: np.ndarray = field(repr=False)

    @property
    def log_Z(self) -> float:
        return float(logsumexp(self.log_weights))

    @property
    def weights(self) -> np.ndarray:
        return np.exp(self.log_weights)

    @property
    def Z(self) -> float:
        return float(np.exp(self.log_Z))

    @property
    def probabilities(self) -> np.ndarray:
        return np.exp(self.log_weights - self.log_Z)

    def as_dict(self) -> dict[tuple[int, ...], float]:
        return {tuple(int(s) for s in c): float(p) for c, p in zip(self.configs, self.probabilities)}


def build_measure(tree: FiniteTree, lam: float, law: PeriodicState) -> FiniteVolumeMeasure:
    """Enumerate ``Omega^G_{V_n}`` and weight each configuration."""
    lam = check_activity(lam)
    configs = enumerate_admissible(tree, WAND)
    leaf_logz = np.log(_tilde(law.law_at_level(tree.depth)))
    inner = tree.level < tree.depth
    n_occ = np.count_nonzero(configs[:, inner] >= 1, axis=1)
    leaves = configs[:, ~inner]
    log_w = n_occ * np.log(lam) + leaf_logz[leaves].sum(axis=1)
    return FiniteVolumeMeasure(tree, lam, law, configs, log_w)


@dataclass(frozen=True)
class ConsistencyResidual:
    max_abs: float
    config_count: int

    def to_dict(self) -> dict:
        return {"max_abs": self.max_abs, "config_count": self.config_count}

    @classmethod
    def from_dict(cls, d: dict) -> ConsistencyResidual:
        return cls(float(d["max_abs"]), int(d["config_count"]))


def consistency_residual(tree: FiniteTree, lam: float, law: PeriodicState) -> ConsistencyResidual:
    """Largest gap between the depth-``n`` measure marginalised to ``V_{n-1}`` and the depth-``n-1`` measure.

    Non-admissible extensions carry zero weight, so summing over admissible
    configurations only is the same as summing over all extensions with an
    admissibility indicator.  At depth 1 the comparison runs through the
    root, which has ``k + 1`` successors instead of ``k``, so solved laws
    give a zero residual from depth 2 on.
    """
    if tree.depth < 1:
        raise DomainError("consistency needs depth >= 1")
    fine = build_measure(tree, lam, law)
    coarse = build_measure(FiniteTree(tree.k, tree.depth - 1), lam, law)
    n_prev = coarse.tree.n_vertices
    # breadth-first numbering makes V_{n-1} a prefix of V_n
    prefixes, inverse = np.unique(fine.configs[:, :n_prev], axis=0, return_inverse=True)
    marg = np.bincount(inverse.ravel(), weights=fine.probabilities, minlength=len(prefixes))
    target = coarse.as_dict()
    got = {tuple(int(s) for s in c): float(p) for c, p in zip(prefixes, marg)}
    keys = set(target) | set(got)
    gap = max(abs(got.get(c, 0.0) - target.get(c, 0.0)) for c in keys)
    return ConsistencyResidual(gap, len(target))


def exact_marginal(measure: FiniteVolumeMeasure, vertex: int) -> np.ndarray:
    """``(P(sigma(x) = 0), P(sigma(x) = 1), P(sigma(x) = 2))``."""
    if not 0 <= vertex < measure.tree.n_vertices:
        raise DomainError(f"vertex {vertex} not in tree with {measure.tree.n_vertices} vertices")
    spins = measure.configs[:, vertex]
    return np.bincount(spins, weights=measure.probabilities, minlength=3)


def level_marginals(measure: FiniteVolumeMeasure) -> np.ndarray:
    """Spin distribution averaged over each level; shape ``(depth + 1, 3)``."""
    out = np.zeros((measure.tree.depth + 1, 3))
    for m in range(measure.tree.depth + 1):
        out[m] = np.mean([exact_marginal(measure, x) for x in measure.tree.level_vertices(m)], axis=0)
    return out


def root_law(k: int, lam: float, law: PeriodicState) -> np.ndarray:
    """Root spin distribution ``p_i ~ lam_i ((A zt)_i)^(k+1)`` with ``zt`` from the level-1 law."""
    zt = _tilde(law.law_at_level(1))
    p = activity_vector(lam) * (WAND.matrix @ zt) ** (k + 1)
    return p / p.sum()


def _cumulative(kernel) -> np.ndarray:
    p = kernel.entries
    cum = np.cumsum(p, axis=1)
    cum /= cum[:, -1:]
    for i in range(3):
        last = np.flatnonzero(p[i] > 0)[-1]
        cum[i, last:] = 1.0
    return cum


def _draw(cum_rows: np.ndarray, u: np.ndarray) -> np.ndarray:
    # cum_rows[..., j] = P(spin <= j); u in [0, 1)
    return ((u >= cum_rows[..., 0]).astype(np.int8) + (u >= cum_rows[..., 1]).astype(np.int8))


@dataclass(frozen=True, eq=False)
class MarginalTable:
    """Per-level spin frequencies with standard errors."""

    probability: np.ndarray
    stderr: np.ndarray
    reps: int = 0
    seed: int | None = None

    @property
    def depth(self) -> int:
        return len(self.probability) - 1

    def rows(self):
        for m in range(len(self.probability)):
            for s in range(3):
                yield m, s, float(self.probability[m, s]), float(self.stderr[m, s])

    def __eq__(self, other):
        return (isinstance(other, MarginalTable)
                and np.array_equal(self.probability, other.probability)
                and np.array_equal(self.stderr, other.stderr))

    __hash__ = None


def exact_table(measure: FiniteVolumeMeasure) -> MarginalTable:
    lm = level_marginals(measure)
    return MarginalTable(lm, np.zeros_like(lm))


def sample_chain(k: int, depth: int, z: float, t: float, root_law, reps: int, seed: int,
                 block: int = 1 << 16) -> MarginalTable:
    """Monte Carlo spin frequencies of the tree-indexed chain on ``V_depth``.

    A child on an even level is drawn from ``kernel_from_law(z)`` and a
    child on an odd level from ``kernel_from_law(t)``, given its parent's
    spin.  Replicates are processed in blocks; block ``b`` draws from the
    substream ``SeedSequence(seed, spawn_key=(b,))``, and statistics are
    accumulated as integer counts, so the table is independent of block
    processing order.
    """
    tree = FiniteTree(k, depth)
    p0 = np.asarray(root_law, dtype=float)
    if p0.shape != (3,) or (p0 < 0).any() or abs(p0.sum() - 1.0) > 1e-12:
        raise DomainError(f"root law must be a probability vector on 3 spins, got {root_law}")
    if int(reps) != reps or reps < 1:
        raise DomainError(f"reps must be a positive integer, got {reps!r}")
    root_cum = np.cumsum(p0)
    root_cum /= root_cum[-1]
    cum = {0: _cumulative(kernel_from_law(z)), 1: _cumulative(kernel_from_law(t))}
    sizes = [tree.level_size(m) for m in range(depth + 1)]
    count_sum = np.zeros((depth + 1, 3), dtype=np.int64)
    count_sq = np.zeros((depth + 1, 3), dtype=np.int64)
    for b, start in enumerate(range(0, reps, block)):
        n = min(block, reps - start)
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(b,)))
        u = rng.random((n, 1))
        spins = ((u >= root_cum[0]).astype(np.int8) + (u >= root_cum[1]).astype(np.int8))
        for m in range(depth + 1):
            if m > 0:
                fan = k + 1 if m == 1 else k
                parents = np.repeat(spins, fan, axis=1)
                spins = _draw(cum[m % 2][parents], rng.random(parents.shape))
            counts = np.stack([(spins == s).sum(axis=1) for s in range(3)], axis=1).astype(np.int64)
            count_sum[m] += counts.sum(axis=0)
            count_sq[m] += (counts * counts).sum(axis=0)
    size = np.array(sizes, dtype=float)[:, np.newaxis]
    mean_count = count_sum / reps
    var_count = (count_sq - reps * mean_count ** 2) / max(reps - 1, 1)
    prob = mean_count / size
    stderr = np.sqrt(np.maximum(var_count, 0.0) / reps) / size
    return MarginalTable(prob, stderr, int(reps), int(seed))
