"""Translation-invariant and two-periodic boundary laws.

On the invariant set ``t1 = t2 = t``, ``z1 = z2 = z`` the period-2 system
collapses to ``z = h(t)``, ``t = h(z)`` with the scalar map

    h(x) = alpha * (1 + 1/x)**k,     alpha = lam / 2**k,

which is strictly decreasing on ``(0, inf)`` with range ``(alpha, inf)``.
Its unique fixed point ``xi`` is the translation-invariant law; strict
two-cycles ``z0 != t0`` give the two-periodic laws.  This module solves
that scalar problem by bracketing, by the closed form at ``k = 2`` and by
the cube-root parametrisation at ``k = 3``, and also runs a damped Newton
search on the full four-dimensional system.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, SolverError
from .model import check_activity
from .recursion import (
    CLASSIFY_TOL,
    InvariantSet,
    PeriodicState,
    W_log,
    classify_state,
    residual,
)

log = logging.getLogger(__name__)

#: Residual a returned solution must meet.
RESIDUAL_TARGET = 1e-10
#: Minimum infinity-norm distance between two distinct solutions.
DEDUP_TOL = 1e-6

_TAG_ORDER = {tag: i for i, tag in enumerate(InvariantSet)}


class Kind(str, enum.Enum):
    TI = "TI"
    TWO_PERIODIC = "TWO_PERIODIC"


class Method(str, enum.Enum):
    CLOSED_FORM_K2 = "CLOSED_FORM_K2"
    PARAM_K3 = "PARAM_K3"
    BISECTION_2CYCLE = "BISECTION_2CYCLE"
    TI_BISECTION = "TI_BISECTION"
    NEWTON_4D = "NEWTON_4D"


@dataclass(frozen=True)
class SolutionRecord:
    state: PeriodicState
    tag: InvariantSet
    kind: Kind
    k: int
    lam: float
    residual: float
    method: Method

    @classmethod
    def build(cls, state: PeriodicState, k: int, lam: float, method: Method) -> SolutionRecord:
        tag = classify_state(state)
        ti = tag is InvariantSet.I1 or tag is InvariantSet.I3
        return cls(state, tag, Kind.TI if ti else Kind.TWO_PERIODIC, k, lam,
                   residual(state, k, lam), method)

    def to_dict(self) -> dict:
        s = self.state
        return {
            "state": {"t1": s.t1, "t2": s.t2, "z1": s.z1, "z2": s.z2},
            "tag": self.tag.value,
            "kind": self.kind.value,
            "k": self.k,
            "lambda": self.lam,
            "residual": self.residual,
            "method": self.method.value,
        }

    @classmethod
    def from_dict(cls, d: dict) -> SolutionRecord:
        st = d["state"]
        return cls(
            state=PeriodicState(st["t1"], st["t2"], st["z1"], st["z2"]),
            tag=InvariantSet(d["tag"]),
            kind=Kind(d["kind"]),
            k=int(d["k"]),
            lam=float(d["lambda"]),
            residual=float(d["residual"]),
            method=Method(d["method"]),
        )

    def sort_key(self):
        return (_TAG_ORDER[self.tag], tuple(self.state.to_array()))


def _check_order(k, minimum=2) -> int:
    if int(k) != k or k < minimum:
        raise DomainError(f"order k must be an integer >= {minimum}, got {k!r}")
    return int(k)


@dataclass(frozen=True)
class ScalarMapSpec:
    """Parameters of ``h(x) = alpha (1 + 1/x)**k``."""

    k: int
    lam: float

    def __post_init__(self):
        object.__setattr__(self, "k", _check_order(self.k))
        object.__setattr__(self, "lam", check_activity(self.lam))

    @property
    def alpha(self) -> float:
        return math.exp(math.log(self.lam) - self.k * math.log(2.0))

    @property
    def beta(self) -> float:
        """``h(alpha)``, the largest value ``h`` takes on ``[alpha, inf)``."""
        return h_scalar(self.alpha, self)


def h_scalar(x: float, spec: ScalarMapSpec) -> float:
    """``alpha (1 + 1/x)**k`` for ``x > 0``."""
    if not x > 0:
        raise DomainError(f"h is defined for x > 0, got {x!r}")
    return math.exp(math.log(spec.alpha) + spec.k * math.log1p(1.0 / x))


def h_prime(x: float, spec: ScalarMapSpec) -> float:
    return -spec.k * h_scalar(x, spec) / (x * (1.0 + x))


def solve_ti_symmetric(spec: ScalarMapSpec) -> float:
    """Unique ``xi`` with ``h(xi) = xi``, bracketed on ``[alpha, beta]``."""
    a, b = spec.alpha, spec.beta
    xi = brentq(lambda x: h_scalar(x, spec) - x, a, b, xtol=1e-300, rtol=4 * np.finfo(float).eps,
                maxiter=500)
    err = abs(h_scalar(xi, spec) - xi)
    if err > 1e-12 * max(1.0, xi):
        raise SolverError(f"symmetric fixed point not resolved: |h(xi) - xi| = {err:.3e}")
    return xi


def _cycle_sum(s: float, d: float, spec: ScalarMapSpec) -> float:
    # u + v - (log h(e^v) + log h(e^u)) with u = s + d/2, v = s - d/2
    sp = np.logaddexp(0.0, -s + 0.5 * d) + np.logaddexp(0.0, -s - 0.5 * d)
    return 2.0 * math.log(spec.alpha) + spec.k * sp - 2.0 * s


def _mean_log(d: float, spec: ScalarMapSpec) -> float:
    """The ``s`` solving the sum equation for a given gap ``d``; it is strictly decreasing in ``s``."""
    lo = math.log(spec.alpha) - d
    hi = math.log(spec.beta) + d
    while _cycle_sum(lo, d, spec) < 0:
        lo -= 1.0 + abs(lo)
    while _cycle_sum(hi, d, spec) > 0:
        hi += 1.0 + abs(hi)
    return brentq(_cycle_sum, lo, hi, args=(d, spec), xtol=1e-300, rtol=4 * np.finfo(float).eps,
                  maxiter=500)


def _gap_equation(d: float, spec: ScalarMapSpec) -> float:
    """``(u - v)`` equation of a two-cycle divided by ``d``, with ``s`` eliminated.

    ``log h(e^v) - log h(e^u)`` is evaluated as ``k log1p(...)`` with a
    ``sinh`` so that the division by ``d`` loses no accuracy as ``d -> 0``;
    the limit there is ``|h'(xi)| - 1``.
    """
    s = _mean_log(d, spec)
    ea = math.exp(-s)
    diff = math.log1p(2.0 * ea * math.sinh(0.5 * d) / (1.0 + ea * math.exp(-0.5 * d)))
    return spec.k * diff / d - 1.0


def find_two_cycles(spec: ScalarMapSpec, n_scan: int = 256) -> list[tuple[float, float]]:
    """All strict two-cycles ``(z0, t0)``, ``t0 < xi < z0``, that a sign scan detects.

    With ``u = log z0``, ``v = log t0`` the cycle is solved in the gap
    ``d = u - v`` and the mean ``s = (u + v) / 2``.  The trivial root
    ``d = 0`` is divided out, which keeps rounding noise from producing
    spurious small cycles at the fold.  Gaps are scanned on
    ``[1e-6, log(beta / alpha)]``; results are ordered by ``t0``.
    """
    d_max = spec.k * math.log1p(1.0 / spec.alpha)
    d_min = 1e-6
    if not d_min < d_max:
        return []
    grid = np.geomspace(d_min, d_max, n_scan)
    vals = np.array([_gap_equation(d, spec) for d in grid])
    cycles = []
    for i in np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) <= 0):
        if vals[i + 1] == 0.0 and i + 1 < len(grid) - 1:
            continue
        if vals[i] == 0.0:
            d = grid[i]
        elif vals[i + 1] == 0.0:
            d = grid[i + 1]
        else:
            d = brentq(_gap_equation, grid[i], grid[i + 1], args=(spec,), xtol=1e-300,
                       rtol=4 * np.finfo(float).eps, maxiter=500)
        s = _mean_log(d, spec)
        cycles.append((math.exp(s + 0.5 * d), math.exp(s - 0.5 * d)))
    cycles.sort(key=lambda c: c[1])
    return cycles


def solve_two_cycle(spec: ScalarMapSpec) -> tuple[float, float] | None:
    """A strict two-cycle ``(z0, t0)`` of ``h`` with ``z0 > t0``, or None.

    When several are present the one with the smallest ``t0`` is returned.
    """
    cycles = find_two_cycles(spec)
    if not cycles:
        return None
    z0, t0 = cycles[0]
    err = max(abs(h_scalar(z0, spec) - t0), abs(h_scalar(t0, spec) - z0))
    if err > RESIDUAL_TARGET * max(1.0, z0):
        log.warning("two-cycle at k=%d lam=%g has residual %.3e", spec.k, spec.lam, err)
    return z0, t0


def closed_form_k2(lam: float) -> tuple[float, float] | None:
    """Two-periodic law ``(z, t)`` at ``k = 2``, or None for ``lam >= 1``.

    ``z = (1 + sqrt(1 - lam))**2 / lam`` and ``t = 1 / z``.
    """
    lam = check_activity(lam)
    if lam >= 1.0:
        return None
    t = lam / (1.0 + math.sqrt(1.0 - lam)) ** 2
    return 1.0 / t, t


CBRT2 = 2.0 ** (1.0 / 3.0)
PHI_MAX = 4.0 * CBRT2 / 3.0


def phi_k3(x):
    """``(x + x sqrt(1 + 4x^3)) / (1 + x^3)``: cube root of the activity along the k = 3 two-cycle curve."""
    x = np.asarray(x, dtype=float)
    x3 = x ** 3
    return (x + x * np.sqrt(1.0 + 4.0 * x3)) / (1.0 + x3)


def _f_k3(x, b):
    return b * (1.0 + x ** 3) / (2.0 * x ** 3)


def solve_k3_parametrized(lam: float) -> list[tuple[float, float]]:
    """Strict two-cycles at ``k = 3`` from ``cbrt(lam) = phi(x)``, ``x = cbrt(z)``.

    ``phi`` rises on ``(0, cbrt 2]`` and falls on ``[cbrt 2, inf)``, so each
    branch holds at most one root.  The pairs come back with the larger
    ``z`` first; at and above ``128/27`` the list is empty.
    """
    lam = check_activity(lam)
    b = float(np.cbrt(lam))
    if b >= PHI_MAX:
        return []
    eq = lambda x: float(phi_k3(x)) - b  # noqa: E731
    tol = dict(xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    lo = min(b / 4.0, CBRT2 / 2)
    while eq(lo) > 0:
        lo /= 2.0
    hi = max(2.0 * CBRT2, 16.0 / b ** 2)
    while eq(hi) > 0:
        hi *= 2.0
    roots = []
    for a, c in ((lo, CBRT2), (CBRT2, hi)):
        if eq(a) * eq(c) < 0:
            roots.append(brentq(eq, a, c, **tol))
    pairs = []
    for x in roots:
        z, t = float(x) ** 3, float(_f_k3(x, b)) ** 3
        if abs(z - t) > 1e-9 * max(z, t):
            pairs.append((z, t))
    pairs.sort(reverse=True)
    return pairs


def two_cycles(k: int, lam: float) -> tuple[list[tuple[float, float]], Method]:
    """Strict two-cycles ``(z, t)`` with ``z > t`` and the method that produced them."""
    k = _check_order(k)
    if k == 2:
        pair = closed_form_k2(lam)
        return ([] if pair is None else [pair]), Method.CLOSED_FORM_K2
    if k == 3:
        pairs = solve_k3_parametrized(lam)
        return [p for p in pairs if p[0] > p[1]], Method.PARAM_K3
    return find_two_cycles(ScalarMapSpec(k, lam)), Method.BISECTION_2CYCLE


def solve_on_I2(k: int, lam: float) -> list[SolutionRecord]:
    """Every law found on ``t1 = t2, z1 = z2``: the symmetric one plus both orderings of each two-cycle."""
    spec = ScalarMapSpec(k, lam)
    xi = solve_ti_symmetric(spec)
    records = [SolutionRecord.build(PeriodicState.uniform(xi), spec.k, spec.lam, Method.TI_BISECTION)]
    cycles, method = two_cycles(spec.k, spec.lam)
    for z, t in cycles:
        for a, c in ((z, t), (t, z)):
            records.append(SolutionRecord.build(PeriodicState.two_cycle(a, c), spec.k, spec.lam, method))
    return sorted(records, key=SolutionRecord.sort_key)


# -- full four-dimensional search ---------------------------------------------

def _jacobian_W_log(u: np.ndarray, k: int) -> np.ndarray:
    """Derivative of ``W_log`` with respect to ``u = log(t1, t2, z1, z2)`` (wand graph)."""

    def block(h):
        e = np.exp(h - np.max(h))
        p = e / e.sum()
        s = 1.0 / (1.0 + np.exp(-h))  # e^h / (1 + e^h)
        return k * (np.diag(s) - p[np.newaxis, :])

    J = np.zeros((4, 4))
    J[0:2, 2:4] = block(u[2:4])
    J[2:4, 0:2] = block(u[0:2])
    return J


def newton_4d(seed: PeriodicState, k: int, lam: float, max_iter: int = 100,
              max_halvings: int = 30) -> PeriodicState | None:
    """Damped Newton on ``u - log W(exp u) = 0`` from ``seed``; None if it does not converge."""
    u = np.log(seed.to_array())
    G = u - W_log(u, k, lam)
    gnorm = np.max(np.abs(G))
    for _ in range(max_iter):
        if gnorm <= 1e-15 * max(1.0, np.max(np.abs(u))):
            break
        J = np.eye(4) - _jacobian_W_log(u, k)
        try:
            step = np.linalg.solve(J, -G)
        except np.linalg.LinAlgError:
            return None
        tau = 1.0
        for _ in range(max_halvings + 1):
            u_new = u + tau * step
            G_new = u_new - W_log(u_new, k, lam)
            g_new = np.max(np.abs(G_new))
            if np.all(np.isfinite(G_new)) and g_new < gnorm:
                break
            tau /= 2.0
        else:
            break
        if np.max(np.abs(u_new)) > 700:
            return None
        u, G, gnorm = u_new, G_new, g_new
    state = PeriodicState.from_array(np.exp(u))
    if residual(state, k, lam) > RESIDUAL_TARGET:
        return None
    return state


def default_seeds(rng_seed: int = 0, n_random: int = 16) -> list[PeriodicState]:
    """Log-uniform lattice on each invariant set plus random interior points."""
    grid = [10.0 ** e for e in range(-2, 3)]
    seeds = [PeriodicState.uniform(a) for a in grid]
    for a in grid:
        for b in grid:
            if a == b:
                continue
            seeds.append(PeriodicState(a, a, b, b))  # I2
            seeds.append(PeriodicState(a, b, a, b))  # I3
            seeds.append(PeriodicState(a, b, b, a))  # I4
    rng = np.random.default_rng(rng_seed)
    for row in 10.0 ** rng.uniform(-2, 2, size=(n_random, 4)):
        seeds.append(PeriodicState.from_array(row))
    return seeds


def solve_full_4d(k: int, lam: float, seed_grid: list[PeriodicState] | None = None) -> list[SolutionRecord]:
    """Distinct fixed points of ``W`` reached by damped Newton from each seed.

    Seeds that fail to converge are dropped.  Results are deduplicated at
    ``DEDUP_TOL`` and sorted by tag, then by state.
    """
    k = _check_order(k)
    lam = check_activity(lam)
    if seed_grid is None:
        seed_grid = default_seeds()
    if not seed_grid:
        raise DomainError("seed grid must not be empty")
    found = [s for s in (newton_4d(seed, k, lam) for seed in seed_grid) if s is not None]
    found.sort(key=lambda s: tuple(s.to_array()))
    distinct: list[PeriodicState] = []
    for s in found:
        if all(np.max(np.abs(s.to_array() - d.to_array())) > DEDUP_TOL for d in distinct):
            distinct.append(s)
    if not distinct:
        raise SolverError(f"no fixed point of W found for k={k}, lam={lam}")
    records = [SolutionRecord.build(s, k, lam, Method.NEWTON_4D) for s in distinct]
    return sorted(records, key=SolutionRecord.sort_key)


__all__ = [
    "CLASSIFY_TOL", "DEDUP_TOL", "Kind", "Method", "RESIDUAL_TARGET", "ScalarMapSpec",
    "SolutionRecord", "closed_form_k2", "default_seeds", "find_two_cycles", "h_prime",
    "h_scalar", "newton_4d", "phi_k3", "solve_full_4d", "solve_k3_parametrized",
    "solve_on_I2", "solve_ti_symmetric", "solve_two_cycle", "two_cycles",
]
