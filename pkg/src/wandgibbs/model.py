"""Spin alphabet, constraint graphs and finite Cayley-tree truncations.

Spins take values in ``{0, 1, 2}``; ``0`` is a vacancy and ``1``, ``2`` are
the two kinds of occupied site.  A configuration on a finite tree is stored
as a 1-D integer array indexed by vertex number in breadth-first order.
"""
from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DomainError, MalformedInputError, SizeLimitError

SPINS = (0, 1, 2)
VACANT = 0

#: Largest vertex count for which ``3**|V|`` enumeration is attempted.
MAX_ENUMERATION_VERTICES = 16


@dataclass(frozen=True)
class ConstraintGraph:
    """Symmetric 0/1 adjacency over the spin alphabet.

    ``adjacency[i][j] == 1`` means spins ``i`` and ``j`` may sit on
    neighbouring vertices.
    """

    adjacency: tuple[tuple[int, int, int], ...]
    name: str = "custom"

    def __post_init__(self):
        a = np.asarray(self.adjacency)
        if a.shape != (3, 3):
            raise MalformedInputError(f"adjacency must be 3x3, got shape {a.shape}")
        if not np.isin(a, (0, 1)).all():
            raise MalformedInputError("adjacency entries must be 0 or 1")
        if not (a == a.T).all():
            raise MalformedInputError("adjacency must be symmetric")

    @classmethod
    def from_edges(cls, edges, name="custom"):
        a = [[0] * 3 for _ in range(3)]
        for i, j in edges:
            a[i][j] = a[j][i] = 1
        return cls(tuple(tuple(row) for row in a), name=name)

    @cached_property
    def matrix(self) -> np.ndarray:
        m = np.array(self.adjacency, dtype=np.int8)
        m.setflags(write=False)
        return m

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in SPINS for j in SPINS if i <= j and self.adjacency[i][j]]


WAND = ConstraintGraph.from_edges([(0, 1), (0, 2), (1, 1), (2, 2)], name="wand")


def activity_vector(lam: float) -> np.ndarray:
    """Vertex activities ``(1, lam, lam)``."""
    lam = check_activity(lam)
    return np.array([1.0, lam, lam])


def check_activity(lam) -> float:
    lam = float(lam)
    if not (lam > 0 and np.isfinite(lam)):
        raise DomainError(f"activity must be a positive finite number, got {lam!r}")
    return lam


@dataclass(frozen=True)
class FiniteTree:
    """Depth-``depth`` truncation ``V_n`` of the Cayley tree of order ``k``.

    Vertex 0 is the root; vertices are numbered breadth first, so every
    level occupies a contiguous index range.  The root has ``k + 1``
    children and every other internal vertex has ``k``.
    """

    k: int
    depth: int
    parent: np.ndarray = field(init=False, repr=False, compare=False)
    level: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise DomainError(f"tree order k must be an integer >= 1, got {self.k!r}")
        if int(self.depth) != self.depth or self.depth < 0:
            raise DomainError(f"depth must be an integer >= 0, got {self.depth!r}")
        parent = [-1]
        level = [0]
        frontier = [0]
        for m in range(1, self.depth + 1):
            nxt = []
            for x in frontier:
                for _ in range(self.k + 1 if x == 0 else self.k):
                    parent.append(x)
                    level.append(m)
                    nxt.append(len(parent) - 1)
            frontier = nxt
        p = np.array(parent, dtype=np.int64)
        lv = np.array(level, dtype=np.int64)
        p.setflags(write=False)
        lv.setflags(write=False)
        object.__setattr__(self, "parent", p)
        object.__setattr__(self, "level", lv)

    @property
    def n_vertices(self) -> int:
        return len(self.parent)

    def level_size(self, m: int) -> int:
        """``|W_m|``: 1 for the root, ``(k+1) k^(m-1)`` below it."""
        if m < 0 or m > self.depth:
            raise DomainError(f"level {m} outside 0..{self.depth}")
        return 1 if m == 0 else (self.k + 1) * self.k ** (m - 1)

    def level_vertices(self, m: int) -> np.ndarray:
        return np.flatnonzero(self.level == m)

    @property
    def leaves(self) -> np.ndarray:
        return self.level_vertices(self.depth)

    def successors(self, x: int) -> np.ndarray:
        """Direct successors ``S(x)``."""
        return np.flatnonzero(self.parent == x)

    @property
    def edges(self) -> np.ndarray:
        """``(parent, child)`` pairs, one row per edge of ``L_n``."""
        child = np.arange(1, self.n_vertices)
        return np.column_stack([self.parent[1:], child])


def _as_config(config, tree: FiniteTree) -> np.ndarray:
    n = tree.n_vertices
    if isinstance(config, Mapping):
        missing = [x for x in range(n) if x not in config]
        if missing:
            raise MalformedInputError(f"configuration is missing vertices {missing[:5]}")
        arr = np.array([config[x] for x in range(n)])
    else:
        arr = np.asarray(config)
        if arr.ndim != 1 or arr.shape[0] != n:
            raise MalformedInputError(
                f"configuration must assign a spin to each of the {n} vertices, got shape {arr.shape}"
            )
    if not np.isin(arr, SPINS).all():
        raise MalformedInputError("spins must lie in {0, 1, 2}")
    return arr.astype(np.int8)


def is_admissible(config: Mapping[int, int] | Sequence[int] | np.ndarray,
                  tree: FiniteTree, graph: ConstraintGraph = WAND) -> bool:
    """True iff every nearest-neighbour pair of the tree is an edge of ``graph``."""
    sigma = _as_config(config, tree)
    if tree.n_vertices == 1:
        return True
    e = tree.edges
    return bool(graph.matrix[sigma[e[:, 0]], sigma[e[:, 1]]].all())


def occupied_count(config) -> int:
    """Number of occupied vertices (spin >= 1)."""
    return int(np.count_nonzero(np.asarray(config) >= 1))


def check_enumeration_size(tree: FiniteTree) -> None:
    if tree.n_vertices > MAX_ENUMERATION_VERTICES:
        raise SizeLimitError(
            f"tree with k={tree.k}, depth={tree.depth} has {tree.n_vertices} vertices; "
            f"enumeration is limited to {MAX_ENUMERATION_VERTICES}"
        )


def enumerate_admissible(tree: FiniteTree, graph: ConstraintGraph = WAND) -> np.ndarray:
    """All admissible configurations as an ``(N, |V_n|)`` int8 array.

    Vertices are assigned in breadth-first order; each partial assignment is
    branched over all three spins and pruned as soon as the edge to the
    parent is forbidden.  Rows come out in lexicographic order.
    """
    check_enumeration_size(tree)
    configs = np.array([[s] for s in SPINS], dtype=np.int8)
    spins = np.array(SPINS, dtype=np.int8)
    for v in range(1, tree.n_vertices):
        par = configs[:, tree.parent[v]]
        ext = np.repeat(configs, 3, axis=0)
        new = np.tile(spins, len(configs))
        keep = graph.matrix[np.repeat(par, 3), new].astype(bool)
        configs = np.column_stack([ext[keep], new[keep]])
    return configs


def count_admissible(tree: FiniteTree, graph: ConstraintGraph = WAND) -> int:
    """``|Omega^G_{V_n}|`` by exhaustive enumeration."""
    return len(enumerate_admissible(tree, graph))
