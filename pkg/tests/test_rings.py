from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from mqe.errors import DivisionByNonUnit, NotInvertible, TruncationMismatch
from mqe.rings import (
    CohomologySeries,
    DifferentialOperator,
    HPoly,
    LogSeries,
    Polynomial,
    RationalFunction,
    ZLaurent,
    expand_prefactor,
)
from mqe.sectors import IDENTITY, Sector

fracs = st.fractions(min_value=-1000, max_value=1000, max_denominator=30)
nonzero_fracs = fracs.filter(lambda x: x != 0)
polys = st.lists(fracs, max_size=6).map(lambda c: Polynomial(c, "x"))
nonzero_polys = st.builds(
    lambda c, lead: Polynomial(c + [lead], "x"), st.lists(fracs, max_size=4), nonzero_fracs
)
laurents = st.dictionaries(st.integers(-4, 4), fracs, max_size=4).map(ZLaurent)


@given(polys, polys, polys)
def test_polynomial_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@given(polys, nonzero_polys)
def test_divmod_identity(a, b):
    q, r = divmod(a, b)
    assert q * b + r == a
    assert r.is_zero() or r.degree < b.degree


@given(nonzero_polys, nonzero_polys, nonzero_polys)
@settings(max_examples=50)
def test_gcd_divides(a, b, c):
    g = (a * c).gcd(b * c)
    assert g.leading == 1
    assert ((a * c) % g).is_zero() and ((b * c) % g).is_zero()
    assert (g % c).is_zero()


def test_gcd_example():
    x = Polynomial.gen()
    assert ((x - 1) * (x - 2)).gcd((x - 1) * (x + 3)) == x - 1


@given(nonzero_polys, nonzero_polys, nonzero_polys)
@settings(max_examples=50)
def test_rational_function_canonical(a, b, c):
    r1 = RationalFunction(a * c, b * c)
    r2 = RationalFunction(a, b)
    assert r1 == r2
    assert r1.den.leading == 1
    assert r1.num.gcd(r1.den).degree == 0


def test_rational_function_arithmetic():
    z = RationalFunction.gen("z")
    r = 1 / (z - 1) - 1 / (z + 1)
    assert r == RationalFunction(Polynomial.constant(2, "z"), Polynomial((-1, 0, 1), "z"))
    assert r(3) == Fraction(1, 4)
    assert r.has_pole_at(1)
    with pytest.raises(ZeroDivisionError):
        r(1)


def test_zlaurent_basics():
    a = ZLaurent({1: 2, -1: 3})
    assert a + ZLaurent() == a
    assert (a * ZLaurent.monomial(Fraction(1, 2), -1)).terms == {0: 1, -2: Fraction(3, 2)}
    assert ZLaurent.monomial(4, 2).inverse() == ZLaurent.monomial(Fraction(1, 4), -2)
    with pytest.raises(NotInvertible):
        a.inverse()


@given(laurents, laurents, laurents)
def test_zlaurent_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c


def test_inverse_linear_nilpotent():
    inv = HPoly.inverse_linear(1, 3)
    assert [dict(c.terms) for c in inv.coeffs] == [{-1: 1}, {-2: -1}, {-3: 1}, {-4: -1}]
    half = HPoly.inverse_linear(2, 3)
    assert half.coeffs[0] == ZLaurent.monomial(Fraction(1, 2), -1)
    assert half.coeffs[1] == ZLaurent.monomial(Fraction(-1, 4), -2)


def test_linear_times_inverse():
    f = HPoly.linear(5, 3, 3)
    assert f * HPoly.inverse_linear(3, 3, h_coeff=5) == HPoly.one(3)
    assert f * f.inverse() == HPoly.one(3)
    with pytest.raises(NotInvertible):
        HPoly.inverse_linear(0, 3)


def _e(hp, space="W", d5max=10, sector=IDENTITY):
    return CohomologySeries(space, d5max, {(sector, 0, hp): ZLaurent.one()})


def test_series_nilpotency_and_product():
    h2 = _e(2)
    assert h2.product(h2).terms == {}
    h1 = _e(1)
    assert h1.product(h1) == h2
    s = _e(0)
    assert s + CohomologySeries.zero("W", 10) == s


def test_series_space_mismatch():
    with pytest.raises(TruncationMismatch):
        _e(0, "W") + _e(0, "Y")


def test_series_truncation_propagates():
    a = CohomologySeries("W", 10, {(IDENTITY, 10, 0): ZLaurent.one()})
    b = CohomologySeries("W", 5, {(IDENTITY, 5, 0): ZLaurent.one()})
    assert (a + b).d5max == 5
    assert (a + b).terms == {(IDENTITY, 5, 0): ZLaurent.one()}


def test_nilpotency_on_twisted_sector():
    g = Sector((0, 0, 0, 1, 4))
    s = CohomologySeries("W", 5, {(g, 0, 1): ZLaurent.one()})
    assert s.product(_e(1, d5max=5)).terms == {}


def test_expand_prefactor_unit():
    comps = expand_prefactor(_e(0))
    assert comps[(IDENTITY, 0)] == LogSeries.constant(1, 10)
    assert comps[(IDENTITY, 1)] == LogSeries.t(10)
    assert comps[(IDENTITY, 3)] == LogSeries({(3, 0): Fraction(1, 6)}, 10)


def _naive_prefactor(s, g, p):
    """e^{tH} * s component on H^p, z=1, expanded monomial by monomial."""
    out = {}
    for (sector, d5, j), v in s.terms.items():
        if sector != g:
            continue
        for e, c in v.terms.items():
            k = p - j
            if k < 0:
                continue
            key = (k, d5)
            out[key] = out.get(key, 0) + c / factorial(k)
    return LogSeries(out, s.d5max)


@given(st.dictionaries(
    st.tuples(st.sampled_from([0, 5, 10]), st.integers(0, 3), st.integers(-3, 0)),
    fracs, max_size=8))
def test_expand_prefactor_matches_naive(data):
    terms = {}
    for (d5, p, e), c in data.items():
        key = (IDENTITY, d5, p)
        terms[key] = terms.get(key, ZLaurent()) + ZLaurent({e: c})
    s = CohomologySeries("W", 10, terms)
    comps = expand_prefactor(s)
    for p in range(4):
        assert comps.get((IDENTITY, p), LogSeries(d5max=10)) == _naive_prefactor(s, IDENTITY, p)


def test_logseries_division_and_derivative():
    f = LogSeries.from_eseries({0: 1, 5: 120, 10: 113400}, 10)
    one = f / f
    assert one == LogSeries.constant(1, 10)
    assert LogSeries({(2, 5): 1}, 10).derivative() == LogSeries({(1, 5): 2, (2, 5): 1}, 10)
    with pytest.raises(DivisionByNonUnit):
        f / LogSeries.t(10)


def test_logseries_tpower_cap():
    with pytest.raises(ValueError):
        LogSeries({(5, 0): 1}, 10)


series_st = st.dictionaries(
    st.tuples(st.integers(0, 2), st.integers(0, 15)), fracs, max_size=6
).map(lambda d: LogSeries(d, 15))
ops_st = st.dictionaries(
    st.tuples(st.integers(0, 2), st.integers(0, 10)), fracs, max_size=5
).map(DifferentialOperator)


@given(ops_st, ops_st, series_st)
@settings(max_examples=60)
def test_operator_composition(a, b, s):
    assert a.compose(b).apply(s) == a.apply(b.apply(s))


def test_operator_exponential_rule():
    d = DifferentialOperator({(1, 0): 1})
    e = DifferentialOperator({(0, 5): 1})
    assert d.compose(e) == DifferentialOperator({(1, 5): 1, (0, 5): 1})


def test_json_round_trips():
    g = Sector((0, 0, 1, 1, 3))
    s = CohomologySeries("W", 6, {(g, 0, 0): ZLaurent.one(), (g, 5, 0): ZLaurent({-1: Fraction(3, 7)})})
    assert CohomologySeries.from_json(s.to_json(), "W", 6) == s
    l = LogSeries({(1, 5): Fraction(-2, 3)}, 10)
    assert LogSeries.from_json(l.to_json(), 10) == l
    op = DifferentialOperator({(2, 0): 1, (0, 5): Fraction(-3, 4)})
    assert DifferentialOperator.from_json(op.to_json()) == op
    assert s.to_json()[1]["z"][0]["coeff"] == "3/7"
    assert s.to_json()[0]["z"][0]["coeff"] == "1/1"
