"""Critical activities and the k = 3 bifurcation curves.

Two-cycles of the scalar map exist below

    lam_cr(k) = 2**k (k - 1) ((k - 1) / k)**k,

which gives 1 at ``k = 2`` and ``128/27`` at ``k = 3``.  At ``k = 3`` the
two-cycle points ``x = cbrt(z)`` satisfy ``cbrt(lam) = phi(x)``, while
translation-invariant laws satisfy ``cbrt(lam) = psi(x)``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, FoldDetectionError
from .model import check_activity
from .solvers import CBRT2, PHI_MAX, ScalarMapSpec, phi_k3, solve_two_cycle, two_cycles

__all__ = [
    "CBRT2", "PHI_MAX", "CriticalValue", "PsiVariant", "Source", "count_solutions_on_I2",
    "curve_samples", "find_curve_intersections", "find_phi_maximum", "lambda_critical",
    "numeric_fold_detection", "phi_k3", "phi_k3_derivative_sign", "psi_k3", "solve_ti_branch_k2",
]


class Source(str, enum.Enum):
    FORMULA = "FORMULA"
    NUMERIC_FOLD = "NUMERIC_FOLD"


class PsiVariant(str, enum.Enum):
    CORRECTED = "corrected"
    AS_PRINTED = "as_printed"


@dataclass(frozen=True)
class CriticalValue:
    k: int
    lambda_cr: float
    source: Source

    def to_dict(self) -> dict:
        return {"k": self.k, "lambda_cr": self.lambda_cr, "source": self.source.value}

    @classmethod
    def from_dict(cls, d: dict) -> CriticalValue:
        return cls(int(d["k"]), float(d["lambda_cr"]), Source(d["source"]))


def lambda_critical(k: int) -> float:
    """``2**k (k-1) ((k-1)/k)**k``, evaluated in exact rational arithmetic."""
    if int(k) != k or k < 2:
        raise DomainError(f"lambda_critical needs an integer k >= 2, got {k!r}")
    k = int(k)
    return float(Fraction(2 ** k * (k - 1) * (k - 1) ** k, k ** k))


def psi_k3(x, variant: PsiVariant | str = PsiVariant.CORRECTED):
    """Cube root of the activity along the translation-invariant branch at k = 3.

    The corrected form is

        (x^2 (x^3 - 3) + sqrt(x^4 (x^3 + 3)^2 + 4x)) / (2x (x^3 + 1)).

    ``variant="as_printed"`` replaces ``x^3 - 3`` by ``x^2 - 3``; that
    version does not meet ``phi`` at the known intersection abscissae and is
    kept only for comparison.
    """
    variant = PsiVariant(variant)
    x = np.asarray(x, dtype=float)
    x3 = x ** 3
    inner = (x3 - 3.0) if variant is PsiVariant.CORRECTED else (x ** 2 - 3.0)
    return (x ** 2 * inner + np.sqrt(x ** 4 * (x3 + 3.0) ** 2 + 4.0 * x)) / (2.0 * x * (x3 + 1.0))


def _phi_numerator_derivative(x: float) -> float:
    # numerator of phi'(x); the denominator (1 + x^3)^2 is positive
    x3 = x ** 3
    s = math.sqrt(1.0 + 4.0 * x3)
    return ((1.0 + s) + 6.0 * x3 / s) * (1.0 + x3) - 3.0 * x3 * (1.0 + s)


def phi_k3_derivative_sign(x) -> np.ndarray:
    """Sign of ``phi'(x)`` computed from its closed-form numerator."""
    return np.sign(np.vectorize(_phi_numerator_derivative)(np.asarray(x, dtype=float)))


def find_phi_maximum(lo: float = 0.5, hi: float = 3.0) -> tuple[float, float]:
    """``(x_max, phi(x_max))`` by bisection on the sign of ``phi'``."""
    if not _phi_numerator_derivative(lo) > 0 > _phi_numerator_derivative(hi):
        raise DomainError(f"phi' does not change sign on [{lo}, {hi}]")
    x = brentq(_phi_numerator_derivative, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps)
    return x, float(phi_k3(x))


def find_curve_intersections(variant: PsiVariant | str = PsiVariant.CORRECTED,
                             lo: float = 0.05, hi: float = 10.0, n: int = 2000) -> list[float]:
    """Sorted abscissae where ``phi(x) = psi(x)`` on ``(lo, hi)``."""
    diff = lambda x: float(phi_k3(x) - psi_k3(x, variant))  # noqa: E731
    xs = np.linspace(lo, hi, n)
    d = phi_k3(xs) - psi_k3(xs, variant)
    roots = []
    for i in np.flatnonzero(np.sign(d[:-1]) != np.sign(d[1:])):
        if d[i + 1] == 0.0:
            continue
        roots.append(xs[i] if d[i] == 0.0 else
                     brentq(diff, xs[i], xs[i + 1], xtol=1e-300, rtol=4 * np.finfo(float).eps))
    return [float(r) for r in sorted(roots)]


def curve_samples(lo: float = 0.05, hi: float = 10.0, n: int = 2000,
                  variant: PsiVariant | str = PsiVariant.CORRECTED) -> dict[str, np.ndarray]:
    """``x``, ``phi(x)**3`` and ``psi(x)**3`` on an even grid; the cubes are activities."""
    if not (0 < lo < hi) or n < 2:
        raise DomainError(f"curve range must satisfy 0 < lo < hi and n >= 2, got {lo}:{hi}:{n}")
    x = np.linspace(lo, hi, int(n))
    return {"x": x, "phi_cubed": phi_k3(x) ** 3, "psi_cubed": psi_k3(x, variant) ** 3}


def solve_ti_branch_k2(lam: float) -> float:
    """Positive root of ``sqrt(lam) = 2x^3 / (1 + x^2)``; ``x**2`` is the symmetric law at k = 2."""
    a = math.sqrt(check_activity(lam))
    f = lambda x: 2.0 * x ** 3 / (1.0 + x * x) - a  # noqa: E731
    hi = 1.0
    while f(hi) < 0:
        hi *= 2.0
    return brentq(f, 0.0, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps)


def count_solutions_on_I2(k: int, lam: float) -> int:
    """Laws on ``t1 = t2, z1 = z2``: the symmetric one plus two per strict two-cycle."""
    cycles, _ = two_cycles(k, lam)
    return 1 + 2 * len(cycles)


def _has_cycle(k: int, lam: float, sep: float) -> bool:
    cycle = solve_two_cycle(ScalarMapSpec(k, lam))
    return cycle is not None and abs(cycle[0] - cycle[1]) > sep


def numeric_fold_detection(k: int, tol: float = 1e-8, sep: float = 1e-6, n_probe: int = 24) -> float:
    """Activity at which strict two-cycles disappear, located by bisection.

    The predicate "a two-cycle with ``|z0 - t0| > sep`` exists" is first
    probed on a grid over ``(0, 2 lam_cr]``; if it is not a single
    True-then-False step, :class:`FoldDetectionError` is raised.
    """
    upper = 2.0 * lambda_critical(k)
    probes = np.linspace(upper / n_probe, upper, n_probe)
    flags = [_has_cycle(k, lam, sep) for lam in probes]
    changes = sum(a != b for a, b in zip(flags, flags[1:]))
    if not flags[0] or flags[-1] or changes != 1:
        raise FoldDetectionError(f"two-cycle existence is not monotone in lambda for k={k}: {flags}")
    i = flags.index(False)
    lo, hi = probes[i - 1], probes[i]
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _has_cycle(k, mid, sep):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def critical_value(k: int, source: Source | str = Source.FORMULA) -> CriticalValue:
    source = Source(source)
    value = lambda_critical(k) if source is Source.FORMULA else numeric_fold_detection(k)
    return CriticalValue(int(k), value, source)
