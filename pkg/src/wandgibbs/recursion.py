"""Boundary-law recursion for the three-state hard-core model.

A boundary law on the two parity classes of tree levels is a quadruple
``(t1, t2, z1, z2)``; ``(z1, z2)`` is attached to even levels and
``(t1, t2)`` to odd levels.  The one-level recursion maps the law of the
children to the law of the parent,

    z_i(parent) = lam * prod_children (a_i0 + a_i1 z1 + a_i2 z2) / (a_00 + a_01 z1 + a_02 z2),

and a period-2 law is a fixed point of the map ``W`` that applies this
recursion to both classes at once.  All products are evaluated in log
space, where ``lam * (...)**k`` cannot overflow.
"""
from __future__ import annotations

import enum
from dataclasses import astuple, dataclass

import numpy as np
from scipy.special import logsumexp

from .errors import DomainError
from .model import WAND, ConstraintGraph, check_activity

#: Relative tolerance for deciding that two components are equal.
CLASSIFY_TOL = 1e-9


def _check_positive(name, values):
    for v in values:
        if not (v > 0 and np.isfinite(v)):
            raise DomainError(f"{name} components must be positive and finite, got {values}")


@dataclass(frozen=True)
class BoundaryPair:
    """Exponentiated fields ``(z1, z2) = (exp h1, exp h2)``."""

    z1: float
    z2: float

    def __post_init__(self):
        _check_positive("BoundaryPair", (self.z1, self.z2))

    @classmethod
    def from_fields(cls, h) -> BoundaryPair:
        return cls(float(np.exp(h[0])), float(np.exp(h[1])))

    @property
    def fields(self) -> np.ndarray:
        return np.log([self.z1, self.z2])


@dataclass(frozen=True)
class PeriodicState:
    """Period-2 boundary law: ``(t1, t2)`` on odd levels, ``(z1, z2)`` on even."""

    t1: float
    t2: float
    z1: float
    z2: float

    def __post_init__(self):
        for name in ("t1", "t2", "z1", "z2"):
            object.__setattr__(self, name, float(getattr(self, name)))
        _check_positive("PeriodicState", astuple(self))

    @classmethod
    def from_array(cls, a) -> PeriodicState:
        t1, t2, z1, z2 = (float(v) for v in a)
        return cls(t1, t2, z1, z2)

    @classmethod
    def two_cycle(cls, z: float, t: float) -> PeriodicState:
        """Law with the symmetric pair ``(z, z)`` on even and ``(t, t)`` on odd levels."""
        return cls(t, t, z, z)

    @classmethod
    def uniform(cls, x: float) -> PeriodicState:
        return cls(x, x, x, x)

    def to_array(self) -> np.ndarray:
        return np.array(astuple(self))

    @property
    def even(self) -> BoundaryPair:
        return BoundaryPair(self.z1, self.z2)

    @property
    def odd(self) -> BoundaryPair:
        return BoundaryPair(self.t1, self.t2)

    def law_at_level(self, m: int) -> BoundaryPair:
        return self.even if m % 2 == 0 else self.odd

    def shifted(self) -> PeriodicState:
        """Exchange the roles of the two parity classes."""
        return PeriodicState(self.z1, self.z2, self.t1, self.t2)

    def spin_swapped(self) -> PeriodicState:
        """Image under the exchange of spins 1 and 2."""
        return PeriodicState(self.t2, self.t1, self.z2, self.z1)


class InvariantSet(str, enum.Enum):
    I1 = "I1"  # t1 = t2 = z1 = z2
    I2 = "I2"  # t1 = t2, z1 = z2
    I3 = "I3"  # t1 = z1, t2 = z2
    I4 = "I4"  # t1 = z2, t2 = z1
    NONE = "NONE"


def _log_ratios(h: np.ndarray, graph: ConstraintGraph) -> np.ndarray:
    """``log((a_i0 + a_i1 e^h1 + a_i2 e^h2) / (a_00 + a_01 e^h1 + a_02 e^h2))`` for i = 1, 2.

    ``h`` has shape ``(..., 2)``; the result has the same shape.
    """
    if graph == WAND:
        return F_map(h)
    h = np.asarray(h, dtype=float)
    terms = np.stack(np.broadcast_arrays(np.zeros(h.shape[:-1]), h[..., 0], h[..., 1]), axis=-1)
    a = graph.matrix.astype(bool)
    masked = [np.where(a[i], terms, -np.inf) for i in range(3)]
    logs = [logsumexp(m, axis=-1) for m in masked]
    return np.stack([logs[1] - logs[0], logs[2] - logs[0]], axis=-1)


def F_map(h) -> np.ndarray:
    """The map ``F(h) = (F1(h), F2(h))`` on log-fields ``h = (h1, h2)``.

    ``F1 = log((1 + e^h1) / (e^h1 + e^h2))`` and ``F2`` likewise with
    ``h2`` in the numerator.  Finite for any finite input.
    """
    h = np.asarray(h, dtype=float)
    den = np.logaddexp(h[..., 0], h[..., 1])
    return np.stack([np.logaddexp(0.0, h[..., 0]) - den,
                     np.logaddexp(0.0, h[..., 1]) - den], axis=-1)


def injectivity_system(h) -> np.ndarray:
    """Coefficient matrix of the linear system satisfied by ``d = e^h - e^l`` when ``F(h) = F(l)``.

    Rows are ``(1 - z2, 1 + z1)`` and ``(1 + z2, 1 - z1)`` with ``z = e^h``.
    Its determinant is ``-2 (z1 + z2)``, never zero on positive ``z``.
    """
    z1, z2 = np.exp(np.asarray(h, dtype=float))
    return np.array([[1 - z2, 1 + z1], [1 + z2, 1 - z1]])


def check_injectivity(h, l, tol: float = 1e-12) -> bool:
    """Check that ``F(h) == F(l)`` forces ``h == l`` for this pair.

    Returns False if the linear system above is singular at ``h``, or if
    the images agree within ``tol`` while the arguments differ by more than
    ``1e3 * tol``.
    """
    h = np.asarray(h, dtype=float)
    l = np.asarray(l, dtype=float)
    if np.linalg.det(injectivity_system(h)) == 0.0:
        return False
    same_image = np.max(np.abs(F_map(h) - F_map(l))) <= tol
    same_arg = np.max(np.abs(h - l)) <= 1e3 * tol
    return bool(same_arg or not same_image)


def recursion_log(h_children, k: int, lam: float, graph: ConstraintGraph = WAND) -> np.ndarray:
    """Parent log-law from ``k`` children that all carry log-law ``h_children``."""
    return np.log(lam) + k * _log_ratios(h_children, graph)


def W_log(u, k: int, lam: float, graph: ConstraintGraph = WAND) -> np.ndarray:
    """``log W(exp u)`` for ``u = log(t1, t2, z1, z2)``."""
    u = np.asarray(u, dtype=float)
    new_t = recursion_log(u[..., 2:4], k, lam, graph)
    new_z = recursion_log(u[..., 0:2], k, lam, graph)
    return np.concatenate([new_t, new_z], axis=-1)


def W_map(state: PeriodicState, k: int, lam: float, graph: ConstraintGraph = WAND) -> PeriodicState:
    """One application of the period-2 map.

    ``t_i' = lam ((1 + z_i) / (z1 + z2))**k`` and
    ``z_i' = lam ((1 + t_i) / (t1 + t2))**k`` for the wand graph.
    """
    lam = check_activity(lam)
    return PeriodicState.from_array(np.exp(W_log(np.log(state.to_array()), k, lam, graph)))


def _close(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol * max(abs(a), abs(b))


def classify_state(state: PeriodicState, tol: float = CLASSIFY_TOL) -> InvariantSet:
    """Most specific invariant set containing ``state`` (I1 wins over I2/I3/I4)."""
    if not tol > 0:
        raise DomainError("classification tolerance must be positive")
    t1, t2, z1, z2 = astuple(state)
    eq = lambda a, b: _close(a, b, tol)  # noqa: E731
    if eq(t1, t2) and eq(z1, z2) and eq(t1, z1):
        return InvariantSet.I1
    if eq(t1, t2) and eq(z1, z2):
        return InvariantSet.I2
    if eq(t1, z1) and eq(t2, z2):
        return InvariantSet.I3
    if eq(t1, z2) and eq(t2, z1):
        return InvariantSet.I4
    return InvariantSet.NONE


def in_set(state: PeriodicState, which: InvariantSet, tol: float = CLASSIFY_TOL) -> bool:
    """Membership test that treats I1 as a subset of I2, I3 and I4."""
    tag = classify_state(state, tol)
    if which is InvariantSet.NONE:
        return tag is InvariantSet.NONE
    return tag is which or tag is InvariantSet.I1


def residual(state: PeriodicState, k: int, lam: float, graph: ConstraintGraph = WAND) -> float:
    """``max |state - W(state)|``."""
    return float(np.max(np.abs(state.to_array() - W_map(state, k, lam, graph).to_array())))
