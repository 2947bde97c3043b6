import json
import random
from fractions import Fraction

import pytest

from mqe import bmodel, verify
from mqe.rings import CohomologySeries, ZLaurent
from mqe.sectors import IDENTITY, Sector

SHAPES = verify.SHAPES


def _mutate(s: CohomologySeries, key, e, delta=Fraction(1, 3)) -> CohomologySeries:
    terms = dict(s.terms)
    terms[key] = terms.get(key, ZLaurent()) + ZLaurent({e: delta})
    return CohomologySeries(s.space, s.d5max, terms)


@pytest.mark.parametrize("g", SHAPES)
def test_compare_ab_passes(g):
    assert verify.compare_ab(g, 30).passed


def test_compare_ab_locates_mutations():
    rng = random.Random(7)
    for _ in range(20):
        g = rng.choice(SHAPES)
        b = bmodel.iB(g, 20)
        key = rng.choice(sorted(b.terms))
        e = rng.choice(sorted(b.terms[key].terms))
        report = verify.compare_ab(g, 20, b_series=_mutate(b, key, e))
        sector, d5, p = key
        assert len(report.mismatches) == 1
        assert report.mismatches[0].where == f"sector={sector} d5={d5} hPower={p} zexp={e}"


@pytest.mark.parametrize("g", SHAPES)
def test_pf_annihilation_passes(g):
    res = bmodel.derive_pf(g)
    assert verify.pf_annihilates(res.operator_t, g, 60).passed


def test_pf_wrong_operator_fails():
    op = bmodel.derive_pf(Sector((0, 0, 0, 1, 4))).operator_t
    assert not verify.pf_annihilates(op, Sector((0, 0, 0, 2, 3)), 30).passed


def test_pf_detects_mutations():
    rng = random.Random(2)
    for _ in range(10):
        g = rng.choice(SHAPES)
        res = bmodel.derive_pf(g)
        n = 40
        limit = n - 5 * res.order
        b = bmodel.iB(g, n)
        key = rng.choice([k for k in sorted(b.terms) if k[1] <= limit - 5])
        e = rng.choice(sorted(b.terms[key].terms))
        report = verify.pf_annihilates(res.operator_t, g, n, series=_mutate(b, key, e))
        assert not report.passed
        assert any(f"d5={key[1]}" in m.where or f"d5={key[1] + 5}" in m.where for m in report.mismatches)


@pytest.mark.parametrize("g", SHAPES)
def test_reference_operator_match(g):
    assert verify.match_reference_operator(bmodel.derive_pf(g)).passed


def test_reference_operator_permutation():
    for g in (Sector((4, 0, 1, 0, 0)), Sector((2, 0, 2, 1, 0)), Sector((3, 0, 0, 2, 0))):
        assert verify.match_reference_operator(bmodel.derive_pf(g)).passed


def test_reference_operator_mismatch_reported():
    res = bmodel.derive_pf(Sector((0, 0, 0, 1, 4)))
    wrong = bmodel.PFResult(Sector((0, 0, 0, 2, 3)), res.order, res.operator_psi, res.operator_t)
    assert not verify.match_reference_operator(wrong).passed


def test_mirror_consistency():
    report = verify.mirror_consistency(10)
    assert report.passed, str(report)


def test_basis_count():
    assert verify.basis_count_check().passed


def test_dimension_sweep():
    assert verify.dimension_identity_sweep(3).passed


def test_recursion_report():
    rng = random.Random(4)
    report = verify.recursion_check([verify.random_weights(rng)], 8, [IDENTITY, Sector((0, 0, 1, 1, 3))])
    assert report.passed


def test_report_json_and_text():
    r = verify.VerificationReport("demo", 5)
    assert r.status == "pass"
    r.add("here", 1, Fraction(2, 3))
    assert r.to_json() == {
        "check": "demo",
        "status": "fail",
        "d5max": 5,
        "mismatches": [{"where": "here", "expected": "1/1", "actual": "2/3"}],
    }
    assert "expected 1/1, got 2/3" in str(r)


def test_run_all_deterministic():
    a = [r.to_json() for r in verify.run_all(10, seed=3, c_max=6, permuted=3)]
    b = [r.to_json() for r in verify.run_all(10, seed=3, c_max=6, permuted=3)]
    assert json.dumps(a) == json.dumps(b)
    assert [r["check"] for r in a] == sorted(r["check"] for r in a)
    assert all(r["status"] == "pass" for r in a)
