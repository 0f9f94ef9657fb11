"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines inline;
they are also written straight to the terminal when capture is on.
"""
import time
from contextlib import contextmanager

import numpy as np
import pytest

from wandgibbs.critical import (
    count_solutions_on_I2,
    find_curve_intersections,
    find_phi_maximum,
    lambda_critical,
    numeric_fold_detection,
    phi_k3,
    psi_k3,
)
from wandgibbs.extremality import (
    Verdict,
    analyze,
    kappa_of,
    product_kernel,
    product_kernel_closed_form,
    second_eigenvalue,
)
from wandgibbs.model import FiniteTree
from wandgibbs.oracle import build_measure, consistency_residual, exact_table, root_law, sample_chain
from wandgibbs.recursion import F_map, InvariantSet, PeriodicState, W_map, in_set
from wandgibbs.solvers import ScalarMapSpec, closed_form_k2, solve_full_4d, solve_ti_symmetric

CBRT2 = 1.2599210498948731648
PHI_MAX = 1.6798947331931642197
LAM_CR3 = 128 / 27


@contextmanager
def criterion(capsys, number, title, limit_s):
    """Time the block, then print one PASS/FAIL line whatever happens inside it."""
    detail = {}
    start = time.perf_counter()
    ok = False
    try:
        yield detail
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        ok = ok and elapsed < limit_s
        extra = "; ".join(f"{k}={v}" for k, v in detail.items())
        with capsys.disabled():
            print(f"\n[acceptance {number}] {'PASS' if ok else 'FAIL'} {title} "
                  f"({elapsed:.2f}s, limit {limit_s}s){'; ' + extra if extra else ''}")
    assert elapsed < limit_s, f"criterion {number} took {elapsed:.1f}s, limit {limit_s}s"


def test_1_critical_values(capsys):
    with criterion(capsys, 1, "critical values and fold detection", 30) as d:
        assert lambda_critical(2) == 1.0
        assert abs(lambda_critical(3) - 128 / 27) <= 1e-15 * (128 / 27)
        worst = 0.0
        for k in (2, 3, 4, 5, 6):
            exact = lambda_critical(k)
            rel = abs(numeric_fold_detection(k) - exact) / exact
            worst = max(worst, rel)
            assert rel <= 1e-6, (k, rel)
        d["worst_rel"] = f"{worst:.1e}"


def test_2_solution_counts(capsys):
    rng = np.random.default_rng(2024)
    with criterion(capsys, 2, "solution counts on I2 for k=2, 3", 10) as d:
        below2 = rng.uniform(0, 1, 20)
        above2 = rng.uniform(1, 5, 20)
        above2[0] = 1.0
        below3 = rng.uniform(0, LAM_CR3, 20)
        above3 = rng.uniform(LAM_CR3, 8, 20)
        above3[0] = LAM_CR3
        for lam in below2:
            assert count_solutions_on_I2(2, lam) == 3, lam
        for lam in above2:
            assert count_solutions_on_I2(2, lam) == 1, lam
        for lam in below3:
            assert count_solutions_on_I2(3, lam) == 3, lam
        for lam in above3:
            assert count_solutions_on_I2(3, lam) == 1, lam
        d["cases"] = 80


def test_3_closed_form_k2(capsys):
    rng = np.random.default_rng(3)
    with criterion(capsys, 3, "closed-form two-cycle at k=2", 10) as d:
        z, t = closed_form_k2(0.75)
        assert abs(z - 3) <= 1e-12 and abs(t - 1 / 3) <= 1e-12
        worst_prod = worst_sum = 0.0
        for lam in rng.uniform(0, 1, 100):
            z, t = closed_form_k2(lam)
            worst_prod = max(worst_prod, abs(z * t - 1))
            worst_sum = max(worst_sum, abs(z + t - 2 * (2 - lam) / lam))
        assert worst_prod <= 1e-12 and worst_sum <= 1e-10
        d["max|zt-1|"] = f"{worst_prod:.1e}"
        d["max|z+t-2(2-l)/l|"] = f"{worst_sum:.1e}"


def test_4_figure_curves(capsys):
    with criterion(capsys, 4, "phi maximum and phi/psi intersections at k=3", 10) as d:
        x, phi = find_phi_maximum()
        assert abs(x - CBRT2) <= 1e-8 and abs(phi - PHI_MAX) <= 1e-8
        roots = find_curve_intersections("corrected")
        assert len(roots) == 2
        assert abs(roots[0] - 0.4531316267) <= 1e-6 and abs(roots[1] - 1.813976199) <= 1e-6
        printed = find_curve_intersections("as_printed")
        miss = max(min((abs(r - x) for r in printed), default=np.inf) for x in (0.4531316267, 1.813976199))
        assert miss > 0.1
        assert abs(psi_k3(1.813976199, "as_printed") - phi_k3(1.813976199)) > 0.3
        d["roots"] = f"{roots[0]:.10f},{roots[1]:.9f}"
        d["as_printed_miss"] = f"{miss:.3f}"


def test_5_spectral_identities(capsys):
    rng = np.random.default_rng(5)
    with criterion(capsys, 5, "spectral identities of the product chain", 10) as d:
        z = 10.0 ** rng.uniform(-3, 3, 1000)
        worst_s2 = worst_kappa = 0.0
        for a in z:
            b = 1 / a
            p = product_kernel(a, b)
            worst_s2 = max(worst_s2, abs(second_eigenvalue(p) - 1 / (a + b + 2)))
            m = max(a, b)
            worst_kappa = max(worst_kappa, abs(kappa_of(p) - m / (1 + m) ** 2))
        assert worst_s2 <= 1e-12 and worst_kappa <= 1e-12
        worst_sym = 0.0
        for a, b in 10.0 ** rng.uniform(-2, 2, (1000, 2)):
            worst_sym = max(worst_sym, np.max(np.abs(product_kernel(a, b).entries
                                                     - product_kernel_closed_form(a, b))))
        # the displayed diagonal (t + 3) / (2 (1 + z)(1 + t)) holds on zt = 1
        worst_disp = 0.0
        for a in z:
            b = 1 / a
            e = product_kernel(a, b).entries
            worst_disp = max(worst_disp, abs(e[1, 1] - (b + 3) / (2 * (1 + a) * (1 + b))))
        assert worst_sym <= 1e-14 and worst_disp <= 1e-14
        d["s2"] = f"{worst_s2:.1e}"
        d["kappa"] = f"{worst_kappa:.1e}"
        d["symbolic"] = f"{worst_sym:.1e}"


def test_6_extremality_sweep(capsys):
    with criterion(capsys, 6, "k=2 sweep: both two-periodic measures extreme", 5) as d:
        lams = np.linspace(0.005, 0.995, 200)
        ks_max = 0.0
        for lam in lams:
            reports = analyze(2, lam)
            assert len(reports) == 2
            for r in reports:
                assert r.msw_value < 1 and r.verdict is Verdict.EXTREME
                assert not r.ks_nonextremal and r.ks_value < 1
                # the Kesten-Stigum value is lam^2 / 4, i.e. 9/64 at lam = 3/4
                assert abs(r.ks_value - lam * lam / 4) <= 1e-12
                if lam <= 0.75:
                    assert r.ks_value <= 9 / 64
                ks_max = max(ks_max, r.ks_value)
        d["max_ks"] = f"{ks_max:.4f}"


def test_7_consistency_oracle(capsys):
    with criterion(capsys, 7, "finite-volume consistency of solved laws", 60) as d:
        tree = FiniteTree(2, 2)
        worst_ok, weakest_bad = 0.0, np.inf
        for lam in (0.25, 0.5, 0.75):
            z, t = closed_form_k2(lam)
            xi = solve_ti_symmetric(ScalarMapSpec(2, lam))
            for law in (PeriodicState.uniform(xi), PeriodicState.two_cycle(z, t), PeriodicState.two_cycle(t, z)):
                worst_ok = max(worst_ok, consistency_residual(tree, lam, law).max_abs)
                for f in (1.05, 0.95):
                    bad = PeriodicState.from_array(law.to_array() * f)
                    weakest_bad = min(weakest_bad, consistency_residual(tree, lam, bad).max_abs)
        assert worst_ok <= 1e-10 and weakest_bad >= 1e-4
        d["solved_max"] = f"{worst_ok:.1e}"
        d["perturbed_min"] = f"{weakest_bad:.1e}"


def _random_state(which, rng):
    a, b, c, e = np.exp(rng.uniform(-3, 3, 4))
    return {
        InvariantSet.I1: PeriodicState(a, a, a, a),
        InvariantSet.I2: PeriodicState(a, a, b, b),
        InvariantSet.I3: PeriodicState(a, b, a, b),
        InvariantSet.I4: PeriodicState(a, b, b, a),
    }[which]


def test_8_invariant_sets(capsys):
    rng = np.random.default_rng(8)
    with criterion(capsys, 8, "invariant-set closure, injectivity, I4 collapse", 10) as d:
        for which in (InvariantSet.I1, InvariantSet.I2, InvariantSet.I3, InvariantSet.I4):
            for _ in range(1000):
                s = _random_state(which, rng)
                k, lam = int(rng.integers(2, 7)), float(rng.uniform(0.01, 10))
                assert in_set(W_map(s, k, lam), which)
        h = rng.uniform(-10, 10, (10_000, 2))
        l = rng.uniform(-10, 10, (10_000, 2))
        assert (np.max(np.abs(h - l), axis=1) >= 1e-6).all()
        assert (np.max(np.abs(F_map(h) - F_map(l)), axis=1) > 0).all()
        solved = 0
        for _ in range(20):
            k, lam = int(rng.integers(2, 6)), float(rng.uniform(0.05, 20))
            seeds = [PeriodicState(a, b, b, a) for a, b in 10.0 ** rng.uniform(-1.5, 1.5, (6, 2))]
            for r in solve_full_4d(k, lam, seeds):
                s = r.state
                assert abs(s.z1 - s.z2) <= 1e-8 * s.z1 and abs(s.t1 - s.t2) <= 1e-8 * s.t1
                solved += 1
        d["I4_solutions"] = solved


def test_9_monte_carlo(capsys):
    with criterion(capsys, 9, "chain sampler against exact marginals", 60) as d:
        lam = 0.75
        z, t = closed_form_k2(lam)
        worst = 0.0
        for law in (PeriodicState.two_cycle(z, t), PeriodicState.two_cycle(t, z)):
            exact = exact_table(build_measure(FiniteTree(2, 2), lam, law)).probability
            mc = sample_chain(2, 4, law.z1, law.t1, root_law(2, lam, law), reps=10 ** 6, seed=2024)
            diff = np.abs(mc.probability[:3] - exact)
            se = mc.stderr[:3]
            assert (se > 0).all()
            score = diff / se
            worst = max(worst, float(score.max()))
            assert (score <= 4).all()
        d["max_z_score"] = f"{worst:.2f}"
