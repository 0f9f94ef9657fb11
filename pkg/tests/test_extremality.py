import json
import logging

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wandgibbs.errors import ContractViolation, DomainError, MalformedInputError
from wandgibbs.extremality import (
    ExtremalityReport,
    TransitionKernel,
    Verdict,
    analyze,
    analyze_ti,
    kappa_of,
    kernel_from_law,
    kesten_stigum,
    msw_extremality,
    nontrivial_eigenvalues,
    product_kernel,
    product_kernel_closed_form,
    report_for_law,
    second_eigenvalue,
)
from wandgibbs.solvers import closed_form_k2


def _random_reciprocal_pairs(n, seed):
    z = 10.0 ** np.random.default_rng(seed).uniform(-3, 3, size=n)
    return z, 1.0 / z


def test_kernel_validation():
    with pytest.raises(MalformedInputError):
        TransitionKernel(np.eye(2))
    with pytest.raises(MalformedInputError):
        TransitionKernel(np.full((3, 3), 0.5))
    with pytest.raises(MalformedInputError):
        TransitionKernel([[1.5, -0.5, 0], [0, 1, 0], [0, 0, 1]])
    with pytest.raises(DomainError):
        kernel_from_law(0.0)


def test_kernel_examples():
    assert np.allclose(kernel_from_law(1.0).entries, [[0, .5, .5], [.5, .5, 0], [.5, 0, .5]], atol=0)
    assert np.allclose(kernel_from_law(3.0).entries[1], [0.25, 0.75, 0.0], atol=0)
    for z in (1e-6, 0.3, 7.0, 1e6):
        assert np.allclose(kernel_from_law(z).entries.sum(axis=1), 1.0, atol=1e-15)
    # the non-edge {1, 2} and the vacancy pair {0, 0} get zero weight
    p = kernel_from_law(2.0, 5.0).entries
    assert p[0, 0] == p[1, 2] == p[2, 1] == 0.0


def test_product_kernel_examples():
    p = product_kernel(1.0, 1.0).entries
    assert np.allclose(p[0], [0.5, 0.25, 0.25], atol=1e-16)
    assert np.allclose(p[1], [0.25, 0.5, 0.25], atol=1e-16)
    assert np.allclose(p.sum(axis=1), 1.0, atol=1e-15)


def test_product_closed_form_matches_multiplication():
    rng = np.random.default_rng(1)
    z = 10.0 ** rng.uniform(-2, 2, size=1000)
    t = 10.0 ** rng.uniform(-2, 2, size=1000)
    worst = max(np.max(np.abs(product_kernel(a, b).entries - product_kernel_closed_form(a, b)))
                for a, b in zip(z, t))
    assert worst <= 1e-14


def test_product_closed_form_on_unit_product_pairs():
    # with zt = 1 the diagonal entries take the shorter form (t + 3) / (2 (1 + z)(1 + t))
    z, t = _random_reciprocal_pairs(1000, 9)
    for a, b in zip(z, t):
        p = product_kernel(a, b).entries
        short = (b + 3) / (2 * (1 + a) * (1 + b))
        assert abs(p[1, 1] - short) <= 1e-14 and abs(p[2, 2] - short) <= 1e-14
    # but not in general
    assert abs(product_kernel(2.0, 2.0).entries[1, 1] - 5 / 18) > 0.1


def test_second_eigenvalue_examples():
    assert second_eigenvalue(product_kernel(1.0, 1.0)) == pytest.approx(0.25, abs=1e-15)
    assert second_eigenvalue(product_kernel(3.0, 1 / 3)) == pytest.approx(3 / 16, abs=1e-15)
    assert second_eigenvalue(TransitionKernel(np.eye(3))) == 1.0


def test_second_eigenvalue_against_numpy():
    rng = np.random.default_rng(2)
    for _ in range(200):
        z, t = 10.0 ** rng.uniform(-2, 2, size=2)
        p = product_kernel(z, t)
        ev = np.linalg.eigvals(p.entries)
        ev = ev[np.argsort(-np.abs(ev))]
        assert abs(ev[0] - 1) < 1e-12
        assert sorted(np.abs(nontrivial_eigenvalues(p))) == pytest.approx(sorted(np.abs(ev[1:])), abs=1e-12)


def test_eigenvalues_of_product_are_known():
    # nontrivial spectrum of P_z P_t is {1/((1+z)(1+t)), zt/((1+z)(1+t))}
    rng = np.random.default_rng(8)
    for z, t in 10.0 ** rng.uniform(-2, 2, size=(200, 2)):
        got = sorted(v.real for v in nontrivial_eigenvalues(product_kernel(z, t)))
        want = sorted([1 / ((1 + z) * (1 + t)), z * t / ((1 + z) * (1 + t))])
        assert got == pytest.approx(want, abs=1e-13)


def test_spectral_identities_with_unit_product():
    z, t = _random_reciprocal_pairs(1000, 3)
    for a, b in zip(z, t):
        p = product_kernel(a, b)
        assert abs(second_eigenvalue(p) - 1 / (a + b + 2)) <= 1e-12
        m = max(a, b)
        assert abs(kappa_of(p) - m / (1 + m) ** 2) <= 1e-12


def test_complex_pair_logs_warning(caplog):
    rot = TransitionKernel([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]])
    with caplog.at_level(logging.WARNING, logger="wandgibbs.extremality"):
        assert second_eigenvalue(rot) == pytest.approx(1.0, abs=1e-15)
    assert "complex" in caplog.text


def test_kappa_examples():
    assert kappa_of(product_kernel(3.0, 1 / 3)) == pytest.approx(3 / 16, abs=1e-15)
    assert kappa_of(product_kernel(1.0, 1.0)) == pytest.approx(0.25, abs=1e-15)
    assert kappa_of(TransitionKernel(np.tile([0.2, 0.3, 0.5], (3, 1)))) == 0.0


def test_kesten_stigum_examples():
    value, fires = kesten_stigum(2, 3.0, 1 / 3)
    assert value == pytest.approx(9 / 64, abs=1e-15) and not fires
    value, fires = kesten_stigum(2, 1.0, 1.0)
    assert value == pytest.approx(0.25, abs=1e-15) and not fires


def test_msw_examples():
    value, extreme = msw_extremality(2, 3.0, 1 / 3)
    assert value == pytest.approx(9 / 64, abs=1e-15) and extreme
    value, extreme = msw_extremality(2, 1e-9, 1e9)
    assert value < 1e-8 and extreme


@settings(max_examples=300, deadline=None)
@given(st.floats(1e-6, 1e6))
def test_msw_below_one_for_reciprocal_pairs(z):
    value, extreme = msw_extremality(2, z, 1 / z)
    assert value == pytest.approx(4 * z * z / (1 + z) ** 4, rel=1e-9, abs=1e-300)
    assert extreme


def test_ks_at_k2_equals_quarter_lambda_squared():
    for lam in np.linspace(0.01, 0.99, 50):
        z, t = closed_form_k2(lam)
        assert kesten_stigum(2, z, t)[0] == pytest.approx(lam * lam / 4, rel=1e-12)


def test_analyze_examples():
    reports = analyze(2, 0.5)
    assert len(reports) == 2
    assert all(r.verdict is Verdict.EXTREME for r in reports)
    assert analyze(2, 1.5) == []
    k3 = analyze(3, 4.0)
    assert len(k3) == 2
    for r in k3:
        assert r.verdict is (Verdict.NOT_EXTREME if r.ks_nonextremal else Verdict.INCONCLUSIVE)


def test_mu1_mu2_symmetry():
    for k, lam in ((2, 0.2), (2, 0.9), (3, 1.0), (3, 4.0), (4, 10.0)):
        mu1, mu2 = analyze(k, lam)
        assert (mu1.z, mu1.t) == (mu2.t, mu2.z)
        assert mu1.z > mu1.t
        assert mu1.s2 == pytest.approx(mu2.s2, rel=1e-12)
        assert mu1.kappa == pytest.approx(mu2.kappa, rel=1e-12)
        assert mu1.gamma == pytest.approx(mu2.gamma, rel=1e-12)
        assert mu1.verdict is mu2.verdict


def test_report_flags_match_values():
    for lam in np.linspace(0.05, 0.95, 19):
        for r in analyze(2, lam):
            assert r.ks_nonextremal == (r.ks_value > 1)
            assert r.msw_extremal == (r.msw_value < 1)
            assert not r.ks_nonextremal and r.msw_extremal
            assert r.gamma == r.kappa


def test_contract_violation_when_both_fire(monkeypatch):
    import wandgibbs.extremality as ex
    monkeypatch.setattr(ex, "kappa_of", lambda kernel: 0.0)
    monkeypatch.setattr(ex, "second_eigenvalue", lambda kernel: 0.9)
    with pytest.raises(ContractViolation):
        report_for_law(2, 0.5, 2.0, 0.5, msw_conclusive=True)


def test_ti_report():
    r = analyze_ti(2, 0.75)
    assert r.z == r.t
    assert r.verdict is Verdict.INCONCLUSIVE
    # the symmetric law at large activity crosses the Kesten-Stigum bound
    hi = analyze_ti(2, 200.0)
    assert hi.ks_nonextremal and hi.verdict is Verdict.NOT_EXTREME


def test_report_round_trip():
    for r in analyze(3, 4.0) + analyze(2, 0.75):
        d = json.loads(json.dumps(r.to_dict()))
        assert list(d) == list(ExtremalityReport._FIELDS)
        assert ExtremalityReport.from_dict(d) == r
