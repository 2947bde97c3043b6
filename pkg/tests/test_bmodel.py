import random

import pytest

from mqe import bmodel
from mqe.bmodel import PeriodCombination, PeriodSymbol, derive_pf, psi_derivative, reduce_high_powers
from mqe.errors import ReductionDiverged, UnsupportedSector
from mqe.rings import Polynomial, RationalFunction
from mqe.sectors import IDENTITY, Sector, enumerate_sectors
from mqe.verify import SHAPES, random_symbol, reduction_confluence

from oracles import laurent_derivative, laurent_mul_poly, period_series, twisted_sector_term

PSI = RationalFunction.gen("psi")
M_MAX = 80


def _period_of(c: PeriodCombination, den: Polynomial, m_max: int = M_MAX) -> dict:
    """den(psi) * (period of c) as a psi-Laurent series."""
    out: dict = {}
    for s, f in c.terms.items():
        num = f.num * den.exact_div(f.den)
        part = laurent_mul_poly(period_series(s.exponents, s.pole_order, m_max), num.coeffs)
        for e, v in part.items():
            out[e] = out.get(e, 0) + v
    return out


def _agree(a: dict, b: dict, low: int) -> bool:
    keys = {e for e in set(a) | set(b) if e >= low}
    return all(a.get(e, 0) == b.get(e, 0) for e in keys)


def test_symbol_validation():
    with pytest.raises(ValueError):
        PeriodSymbol((1, 0, 0, 0, 0))
    with pytest.raises(ValueError):
        PeriodSymbol((-1, 1, 0, 0, 0))
    s = PeriodSymbol((0, 0, 1, 1, 3))
    assert s.pole_order == 2
    assert s.is_canonical()
    assert str(s) == "[0,0,1,1,3]_2"


def test_mixed_classes_rejected():
    with pytest.raises(ValueError):
        PeriodCombination({PeriodSymbol((0,) * 5): 1, PeriodSymbol((0, 0, 1, 1, 3)): 1})


def test_psi_derivative_rule():
    c = PeriodCombination.single(PeriodSymbol((0,) * 5), PSI)
    d = psi_derivative(c)
    assert d == PeriodCombination({PeriodSymbol((0,) * 5): 1, PeriodSymbol((1,) * 5): PSI})


def test_canonical_is_fixed_point():
    for s in bmodel.canonical_symbols((0, 0, 1, 1, 3)):
        c = PeriodCombination.single(s)
        assert reduce_high_powers(c) == c


def test_canonical_symbols_untwisted():
    syms = bmodel.canonical_symbols((0,) * 5)
    assert [s.exponents for s in syms] == [(k,) * 5 for k in range(4)]


def test_reduce_top_symbol_untwisted():
    c = reduce_high_powers(PeriodCombination.single(PeriodSymbol((4,) * 5)))
    assert set(c.terms) == {PeriodSymbol((k,) * 5) for k in range(4)}
    den = Polynomial((-3125, 0, 0, 0, 0, 1), "psi")
    lhs = laurent_mul_poly(period_series((4,) * 5, 5, M_MAX), den.coeffs)
    assert _agree(lhs, _period_of(c, den), -M_MAX + 10)


@pytest.mark.parametrize("seed", range(8))
def test_untwisted_reduction_against_periods(seed):
    rng = random.Random(seed)
    s = random_symbol(rng, (0,) * 5, max_pole=6)
    c = reduce_high_powers(PeriodCombination.single(s))
    assert all(t.is_canonical() for t in c.terms)
    den = Polynomial.constant(1, "psi")
    for f in c.terms.values():
        den = (den * f.den).exact_div(den.gcd(f.den))
    lhs = laurent_mul_poly(period_series(s.exponents, s.pole_order, M_MAX), den.coeffs)
    assert _agree(lhs, _period_of(c, den), -M_MAX + 15)


def test_cap_raises():
    with pytest.raises(ReductionDiverged):
        reduce_high_powers(PeriodCombination.single(PeriodSymbol((9, 1, 0, 0, 0))), cap=1)


def test_trace_records_rewrites():
    trace = []
    reduce_high_powers(PeriodCombination.single(PeriodSymbol((4,) * 5)), trace=trace)
    assert trace


def test_confluence_hundred_seeds():
    report = reduction_confluence(random.Random(0), 100)
    assert report.passed, str(report)


def test_pf_untwisted_psi_form_kills_period():
    res = derive_pf(IDENTITY)
    assert res.order == 4
    omega = {e + 1: c for e, c in period_series((0,) * 5, 1, M_MAX).items()}  # psi * [0]_1
    total: dict = {}
    deriv = omega
    for f in res.operator_psi:
        for e, v in laurent_mul_poly(deriv, f.coeffs).items():
            total[e] = total.get(e, 0) + v
        deriv = laurent_derivative(deriv)
    assert all(v == 0 for e, v in total.items() if e >= -M_MAX + 15)


@pytest.mark.parametrize(
    "g, roots",
    [
        ((0, 0, 0, 0, 0), "D^4 - 3125 e^t (D+1/5)(D+2/5)(D+3/5)(D+4/5)"),
        ((0, 0, 0, 1, 4), "D^2 - 3125 e^t (D+2/5)(D+3/5)"),
        ((0, 0, 0, 2, 3), "D^2 - 3125 e^t (D+1/5)(D+4/5)"),
        ((0, 0, 1, 1, 3), "D(D-1/5) - 3125 e^t (D+1/5)(D+3/5)"),
        ((0, 0, 1, 2, 2), "D(D-2/5) - 3125 e^t (D+1/5)(D+2/5)"),
        ((1, 4, 0, 0, 0), "D^2 - 3125 e^t (D+2/5)(D+3/5)"),
        ((2, 3, 0, 0, 0), "D^2 - 3125 e^t (D+1/5)(D+4/5)"),
    ],
)
def test_pf_rows(g, roots):
    from mqe.verify import factored_str

    res = derive_pf(Sector(g))
    assert factored_str(res.operator_t) == roots


@pytest.mark.parametrize("strategy", bmodel.STRATEGIES)
def test_pf_strategy_independent(strategy):
    for g in SHAPES:
        assert derive_pf(g, strategy=strategy).operator_t == derive_pf(g).operator_t


def test_pf_unsupported():
    with pytest.raises(UnsupportedSector):
        derive_pf(Sector((0, 0, 2, 4, 4)))


def test_pf_json_round_trip():
    res = derive_pf(Sector((0, 0, 1, 1, 3)))
    back = bmodel.PFResult.from_json(res.to_json())
    assert back.operator_t == res.operator_t
    assert back.operator_psi == res.operator_psi
    assert back.order == res.order and back.sector == res.sector


@pytest.mark.parametrize("g", SHAPES)
def test_ib_against_oracle(g):
    s = bmodel.iB(g, 15)
    for sector, offset, groups in bmodel.b_sector_data(g):
        for d5 in range(offset, 16, 5):
            ref = twisted_sector_term(d5, groups, sector.dim_w)
            got = {}
            for p in range(sector.dim_w + 1):
                for e, c in s.coefficient(sector, d5, p).terms.items():
                    got[(p, e)] = c
            assert got == ref


def test_ib_second_component():
    g = Sector((0, 0, 1, 1, 3))
    data = bmodel.b_sector_data(g)
    assert [(str(h), off) for h, off, _ in data] == [("0,0,1,1,3", 0), ("4,4,0,0,2", 1)]


def test_component_count_law():
    for g in enumerate_sectors("W"):
        if g.age != 1 and g != IDENTITY:
            continue
        n = len(bmodel.b_sector_data(g))
        assert n == (2 if g.dim_w == 0 else 1)
