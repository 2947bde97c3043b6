"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -s`` or ``python tests/test_acceptance.py``.
All comparisons are exact rational equality (tolerance 0).
"""

import random
import sys
import time
from collections import Counter
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mqe import amodel, bmodel, verify
from mqe.rings import CohomologySeries, ZLaurent
from mqe.sectors import (
    Sector,
    cr_basis,
    enumerate_sectors,
    poincare_dual_w,
)

from oracles import f0_closed_form, harmonic_770, untwisted_term

EXPECTED_ROWS = {
    (0, 0, 0, 0, 0): (4, "D^4 - 3125 e^t (D+1/5)(D+2/5)(D+3/5)(D+4/5)"),
    (0, 0, 0, 1, 4): (2, "D^2 - 3125 e^t (D+2/5)(D+3/5)"),
    (0, 0, 0, 2, 3): (2, "D^2 - 3125 e^t (D+1/5)(D+4/5)"),
    (0, 0, 1, 1, 3): (2, "D(D-1/5) - 3125 e^t (D+1/5)(D+3/5)"),
    (0, 0, 2, 2, 1): (2, "D(D-2/5) - 3125 e^t (D+1/5)(D+2/5)"),
}


def _line(capsys, n: int, ok: bool, detail: str, elapsed: float, budget: float | None) -> None:
    timing = f"{elapsed:.1f}s" + (f" (budget {budget:.0f}s)" if budget else "")
    verdict = "PASS" if ok else "FAIL"
    with capsys.disabled():
        print(f"\ncriterion {n}: {verdict}  {detail}  tolerance exact (0)  {timing}")


def _finish(capsys, n, failures, detail, start, budget=None):
    elapsed = time.perf_counter() - start
    ok = not failures and (budget is None or elapsed < budget)
    _line(capsys, n, ok, detail if not failures else f"{detail}; first failure: {failures[0]}", elapsed, budget)
    assert not failures, failures[:5]
    assert budget is None or elapsed < budget, f"took {elapsed:.1f}s"


def test_criterion_1_operator_table(capsys):
    start = time.perf_counter()
    failures = []
    for g, (order, text) in EXPECTED_ROWS.items():
        res = bmodel.derive_pf(Sector(g))
        if res.order != order:
            failures.append(f"{g}: order {res.order} != {order}")
        if verify.factored_str(res.operator_t) != text:
            failures.append(f"{g}: {verify.factored_str(res.operator_t)} != {text}")
        if not verify.match_reference_operator(res).passed:
            failures.append(f"{g}: reference coefficients differ")
    _finish(capsys, 1, failures, "5 operators, orders 4,2,2,2,2", start, 30)


def test_criterion_2_a_equals_b(capsys):
    start = time.perf_counter()
    variants = list(verify.SHAPES) + verify.permuted_variants(random.Random(0), 10)
    failures = []
    for g in variants:
        r = verify.compare_ab(g, verify.DEFAULT_AB_D5MAX)
        if not r.passed:
            failures.append(str(r))
    _finish(capsys, 2, failures, f"{len(variants)} sectors at d5max=50", start, 60)


def test_criterion_3_pf_annihilation(capsys):
    start = time.perf_counter()
    failures = []
    for g in verify.SHAPES:
        res = bmodel.derive_pf(g)
        r = verify.pf_annihilates(verify.reference_operator(g), g, verify.DEFAULT_PF_D5MAX)
        if not r.passed:
            failures.append(str(r))
        if res.operator_t != verify.reference_operator(g):
            failures.append(f"{g}: derived operator differs from reference")
    _finish(capsys, 3, failures, "all iB components through d5max=125", start, 120)


def test_criterion_4_mirror_map(capsys):
    start = time.perf_counter()
    failures = []
    oracle = untwisted_term(1)
    if oracle[0] != 120 or oracle[1] != harmonic_770():
        failures.append(f"oracle disagrees with closed forms: {oracle}")
    md = amodel.extract_mirror_data(15)
    for d in range(4):
        if md.F0.coefficient(0, 5 * d) != f0_closed_form(d):
            failures.append(f"F0 d={d}: {md.F0.coefficient(0, 5 * d)}")
    if md.F0.coefficient(0, 5) != oracle[0]:
        failures.append("F0 d=1 vs oracle")
    if md.tau.coefficient(0, 5) != oracle[1]:
        failures.append(f"tau d=1: {md.tau.coefficient(0, 5)}")
    if md.F0.coefficient(0, 10) != 113400:
        failures.append("F0 d=2")
    if not verify.mirror_consistency(10).passed:
        failures.append("mirror consistency")
    _finish(capsys, 4, failures, "F0 = 1 + 120e^t + 113400e^2t, tau = t + 770e^t", start)


def test_criterion_5_counts(capsys):
    start = time.perf_counter()
    failures = []
    basis = cr_basis("W")
    if len(basis) != 204:
        failures.append(f"basis {len(basis)}")
    age_one = [g for g in enumerate_sectors("W") if g.age == 1]
    if len(age_one) != 100:
        failures.append(f"age-1 {len(age_one)}")
    types = sorted(Counter(tuple(sorted(g.residues)) for g in age_one).values())
    if types != [20, 20, 30, 30]:
        failures.append(f"types {types}")
    h11 = sum(1 for b in basis if b.h_power + b.sector.age == 1)
    if h11 != 101:
        failures.append(f"h11 {h11}")
    if not verify.basis_count_check().passed:
        failures.append("basis-count check")
    _finish(capsys, 5, failures, "204 / 100 {20,20,30,30} / h11=101", start)


def test_criterion_6_dimension_identity(capsys):
    start = time.perf_counter()
    r = verify.dimension_identity_sweep(3)
    _finish(capsys, 6, [str(m.where) for m in r.mismatches], "all compatible (h,g), d<=3", start, 10)


def test_criterion_7_recursion(capsys):
    start = time.perf_counter()
    rng = random.Random(2024)
    weights = [verify.random_weights(rng) for _ in range(3)]
    r = verify.recursion_check(weights, 15)
    _finish(capsys, 7, [m.where for m in r.mismatches], "3 weight vectors, cMax=15, all age<=1 sectors", start, 60)


def _mutation_soundness(rng) -> list[str]:
    failures = []
    for _ in range(10):
        g = rng.choice(verify.SHAPES)
        b = bmodel.iB(g, 20)
        key = rng.choice(sorted(b.terms))
        e = rng.choice(sorted(b.terms[key].terms))
        terms = dict(b.terms)
        terms[key] = terms[key] + ZLaurent({e: Fraction(1, 7)})
        bad = CohomologySeries("W", 20, terms)
        if len(verify.compare_ab(g, 20, b_series=bad).mismatches) != 1:
            failures.append(f"compare-ab missed mutation at {key}")
        op = verify.reference_operator(g)
        if key[1] <= 20 - 5 * op.order - 5 and verify.pf_annihilates(op, g, 20, series=bad).passed:
            failures.append(f"pf-annihilation missed mutation at {key}")
    return failures


def test_criterion_8_properties(capsys):
    start = time.perf_counter()
    failures = []
    conf = verify.reduction_confluence(random.Random(0), 100)
    failures += [m.where for m in conf.mismatches]
    for b in cr_basis("W"):
        dual, _ = poincare_dual_w(b)
        if poincare_dual_w(dual)[0] != b:
            failures.append(f"duality {b}")
    rng = random.Random(8)
    md = amodel.extract_mirror_data(10)
    for g in verify.permuted_variants(rng, 10):
        rep = Sector(tuple(sorted(g.residues)))
        if amodel.normalization(g, 10) != md.Gg[rep]:
            failures.append(f"G_g not permutation invariant at {g}")
        if bmodel.derive_pf(g).operator_t != bmodel.derive_pf(rep).operator_t:
            failures.append(f"operator not permutation invariant at {g}")
    failures += _mutation_soundness(rng)
    _finish(capsys, 8, failures, "confluence x100, duality, equivariance, mutation soundness", start)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
