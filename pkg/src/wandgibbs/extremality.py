"""Transition kernels of the two-periodic measures and their extremality tests.

A splitting measure with boundary law ``(z, z)`` on the children's level
moves from a parent spin ``i`` to a child spin ``j`` with probability
proportional to ``a_ij z~_j``, ``z~ = (1, z, z)``.  Two consecutive levels
give the product kernel ``P_z P_t``, a Markov chain on the tree of order
``k**2`` formed by every other level.  Non-extremality follows from the
Kesten-Stigum bound ``k^2 s2^2 > 1``; extremality from
``k^2 kappa gamma < 1`` with ``gamma`` taken equal to ``kappa``.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, DomainError, MalformedInputError
from .solvers import ScalarMapSpec, solve_ti_symmetric, two_cycles

log = logging.getLogger(__name__)

ROW_SUM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class TransitionKernel:
    """Row-stochastic 3x3 matrix."""

    entries: np.ndarray

    def __post_init__(self):
        p = np.array(self.entries, dtype=float)
        if p.shape != (3, 3):
            raise MalformedInputError(f"kernel must be 3x3, got {p.shape}")
        if (p < 0).any() or (p > 1 + ROW_SUM_TOL).any():
            raise MalformedInputError("kernel entries must lie in [0, 1]")
        if np.max(np.abs(p.sum(axis=1) - 1.0)) > ROW_SUM_TOL:
            raise MalformedInputError(f"kernel rows must sum to 1, got {p.sum(axis=1)}")
        p.setflags(write=False)
        object.__setattr__(self, "entries", p)

    def __matmul__(self, other: TransitionKernel) -> TransitionKernel:
        return TransitionKernel(self.entries @ other.entries)

    def __eq__(self, other):
        return isinstance(other, TransitionKernel) and np.array_equal(self.entries, other.entries)

    __hash__ = None


def kernel_from_law(z: float, z2: float | None = None) -> TransitionKernel:
    """One-step wand kernel into a level carrying boundary law ``(z, z2)``.

    With ``z2`` omitted the law is symmetric and the rows are
    ``(0, 1/2, 1/2)``, ``(1/(1+z), z/(1+z), 0)``, ``(1/(1+z), 0, z/(1+z))``.
    """
    z1 = float(z)
    z2 = z1 if z2 is None else float(z2)
    if not (z1 > 0 and z2 > 0):
        raise DomainError(f"boundary law must be positive, got ({z1}, {z2})")
    return TransitionKernel(np.array([
        [0.0, z1 / (z1 + z2), z2 / (z1 + z2)],
        [1.0 / (1.0 + z1), z1 / (1.0 + z1), 0.0],
        [1.0 / (1.0 + z2), 0.0, z2 / (1.0 + z2)],
    ]))


def product_kernel(z: float, t: float) -> TransitionKernel:
    """``P_z @ P_t`` by matrix multiplication."""
    return kernel_from_law(z) @ kernel_from_law(t)


def product_kernel_closed_form(z: float, t: float) -> np.ndarray:
    """Entries of ``P_z P_t`` written out symbolically.

    The diagonal entry ``(1 + t + 2zt) / (2 (1 + z)(1 + t))`` reduces to
    ``(t + 3) / (2 (1 + z)(1 + t))`` on two-cycles with ``zt = 1``.
    """
    a = 1.0 / (1.0 + t)
    b = t / (2.0 * (1.0 + t))
    c = z / ((1.0 + z) * (1.0 + t))
    d = (1.0 + t + 2.0 * z * t) / (2.0 * (1.0 + z) * (1.0 + t))
    e = 1.0 / (2.0 * (1.0 + z))
    return np.array([[a, b, b], [c, d, e], [c, e, d]])


def nontrivial_eigenvalues(kernel: TransitionKernel) -> tuple[complex, complex]:
    """The two eigenvalues other than the unit one.

    Since the rows sum to 1, the characteristic cubic factors as
    ``(s - 1)(s^2 - tr(D) s + det(D))`` with ``D_ij = P_ij - P_0j``
    (``i, j = 1, 2``).  The discriminant is formed as
    ``(D11 - D22)^2 + 4 D12 D21`` so that a double root stays exact.
    """
    p = kernel.entries
    d11, d12 = p[1, 1] - p[0, 1], p[1, 2] - p[0, 2]
    d21, d22 = p[2, 1] - p[0, 1], p[2, 2] - p[0, 2]
    half_tr = 0.5 * (d11 + d22)
    disc = 0.25 * (d11 - d22) ** 2 + d12 * d21
    if disc >= 0:
        r = math.sqrt(disc)
        return complex(half_tr + r), complex(half_tr - r)
    r = math.sqrt(-disc)
    return complex(half_tr, r), complex(half_tr, -r)


def second_eigenvalue(kernel: TransitionKernel) -> float:
    """Eigenvalue of second-largest modulus (the largest is 1).

    Real eigenvalues are returned with their sign.  For a complex pair the
    common modulus is returned and a warning is logged.
    """
    s, s_other = nontrivial_eigenvalues(kernel)
    if s.imag != 0.0:
        log.warning("kernel has complex eigenvalues %s, %s; returning modulus", s, s_other)
        return abs(s)
    return s.real if abs(s.real) >= abs(s_other.real) else s_other.real


def kappa_of(kernel: TransitionKernel) -> float:
    """Half the largest L1 distance between two rows."""
    p = kernel.entries
    return 0.5 * float(np.max(np.abs(p[:, np.newaxis, :] - p[np.newaxis, :, :]).sum(axis=-1)))


def kesten_stigum(k: int, z: float, t: float) -> tuple[float, bool]:
    """``(k^2 s2^2, k^2 s2^2 > 1)`` for the chain ``P_z P_t``; True means not extreme."""
    s2 = second_eigenvalue(product_kernel(z, t))
    value = k * k * s2 * s2
    return value, value > 1.0


def msw_extremality(k: int, z: float, t: float) -> tuple[float, bool]:
    """``(k^2 kappa gamma, k^2 kappa gamma < 1)`` with ``gamma = kappa``; True means extreme."""
    kappa = kappa_of(product_kernel(z, t))
    value = k * k * kappa * kappa
    return value, value < 1.0


class Verdict(str, enum.Enum):
    EXTREME = "EXTREME"
    NOT_EXTREME = "NOT_EXTREME"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class ExtremalityReport:
    k: int
    lam: float
    z: float
    t: float
    s2: float
    ks_value: float
    ks_nonextremal: bool
    kappa: float
    gamma: float
    msw_value: float
    msw_extremal: bool
    verdict: Verdict

    _FIELDS = ("k", "lambda", "z", "t", "s2", "ks_value", "ks_nonextremal", "kappa", "gamma",
               "msw_value", "msw_extremal", "verdict")

    def to_dict(self) -> dict:
        d = {name: getattr(self, "lam" if name == "lambda" else name) for name in self._FIELDS}
        d["verdict"] = self.verdict.value
        return d

    @classmethod
    def from_dict(cls, d: dict) -> ExtremalityReport:
        return cls(
            k=int(d["k"]), lam=float(d["lambda"]), z=float(d["z"]), t=float(d["t"]),
            s2=float(d["s2"]), ks_value=float(d["ks_value"]), ks_nonextremal=bool(d["ks_nonextremal"]),
            kappa=float(d["kappa"]), gamma=float(d["gamma"]), msw_value=float(d["msw_value"]),
            msw_extremal=bool(d["msw_extremal"]), verdict=Verdict(d["verdict"]),
        )


def report_for_law(k: int, lam: float, z: float, t: float, msw_conclusive: bool) -> ExtremalityReport:
    """Run both tests on the chain ``P_z P_t``.

    ``msw_conclusive`` says whether ``k^2 kappa^2 < 1`` may be read as
    extremality; it is only established for the two-periodic measures at
    ``k = 2``.
    """
    kernel = product_kernel(z, t)
    s2 = second_eigenvalue(kernel)
    ks_value = k * k * s2 * s2
    kappa = kappa_of(kernel)
    gamma = kappa
    msw_value = k * k * kappa * gamma
    ks_non, msw_ext = ks_value > 1.0, msw_value < 1.0
    if ks_non and msw_ext:
        raise ContractViolation(
            f"k={k}, lam={lam}, z={z}, t={t}: Kesten-Stigum ({ks_value:.6g}) and "
            f"kappa-gamma ({msw_value:.6g}) conditions disagree"
        )
    if ks_non:
        verdict = Verdict.NOT_EXTREME
    elif msw_ext and msw_conclusive:
        verdict = Verdict.EXTREME
    else:
        verdict = Verdict.INCONCLUSIVE
    return ExtremalityReport(k, lam, z, t, s2, ks_value, ks_non, kappa, gamma, msw_value, msw_ext, verdict)


def analyze(k: int, lam: float) -> list[ExtremalityReport]:
    """Reports for ``mu1`` (law ``(z, t)``, ``z > t``) and ``mu2`` (``(t, z)``) of every two-cycle."""
    cycles, _ = two_cycles(k, lam)
    reports = []
    for z, t in cycles:
        reports.append(report_for_law(k, lam, z, t, msw_conclusive=(k == 2)))
        reports.append(report_for_law(k, lam, t, z, msw_conclusive=(k == 2)))
    return reports


def analyze_ti(k: int, lam: float) -> ExtremalityReport:
    """Both tests applied to the symmetric translation-invariant law ``(xi, xi)``.

    Only the Kesten-Stigum side is decisive here.
    """
    xi = solve_ti_symmetric(ScalarMapSpec(k, lam))
    return report_for_law(k, lam, xi, xi, msw_conclusive=False)
