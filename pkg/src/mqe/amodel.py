"""A-model series: J^Y_g, the twisted I-function I^A_g, mirror data and J^W_g.

Also home to the torus-equivariant rows Y^T_{i,g} specialised at rational
weights, together with a checker for the fixed-point recursion they obey.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .errors import (
    BadFixedPoint,
    EmptySector,
    SingularWeights,
    UnsupportedSector,
)
from .rings.poly import Polynomial, RationalFunction
from .rings.series import (
    CohomologySeries,
    HPoly,
    LogSeries,
    frac_str,
)
from .sectors import (
    IDENTITY,
    N,
    Y_PAIRING_CONSTANT,
    Sector,
    c_count,
    degree_class5,
    enumerate_sectors,
    partners,
    s_set5,
)


def _offset5(h: Sector, g: Sector) -> int:
    d5 = degree_class5(h, g)
    assert d5 is not None
    return d5


@lru_cache(maxsize=None)
def _inv_factor(b5: int, top: int) -> HPoly:
    """1/(H + (b5/5) z)."""
    return HPoly.inverse_linear(Fraction(b5, N), top)


@lru_cache(maxsize=None)
def _twist_factor(m: int, top: int) -> HPoly:
    """5H + m z."""
    return HPoly.linear(5, m, top)


def _jy_blocks(g: Sector, d5max: int) -> dict[tuple[Sector, int], HPoly]:
    blocks: dict[tuple[Sector, int], HPoly] = {}
    for h in partners(g, "Y"):
        target = h.inverse()
        top = target.dim_y
        d5 = _offset5(h, g)
        if d5 > d5max:
            continue
        term = HPoly.one(top)
        for b5, k in s_set5(d5, h):
            term = term * _inv_factor(b5, top)
        blocks[(target, d5)] = term
        while d5 + N <= d5max:
            # extend from d to d + 1: the new pairs have d5 < b5 <= d5 + 5
            for b5 in range(d5 + 1, d5 + N + 1):
                for k in range(N):
                    if b5 % N == h[k]:
                        term = term * _inv_factor(b5, top)
            d5 += N
            blocks[(target, d5)] = term
    return blocks


def jY(g: Sector, d5max: int) -> CohomologySeries:
    """J^Y_g with the prefactor e^(tH/z) left symbolic."""
    if g.zero_count == 0:
        raise EmptySector(f"sector {g} has empty fixed locus on Y")
    if d5max < 0:
        raise ValueError("d5max must be nonnegative")
    return CohomologySeries.from_hpolys("Y", d5max, _jy_blocks(g, d5max))


def modification_factor(d5: int, top: int) -> HPoly:
    """M_d = prod_{m=1}^{5d} (5H + m z)."""
    out = HPoly.one(top)
    for m in range(1, d5 + 1):
        out = out * _twist_factor(m, top)
    return out


def twist(s: CohomologySeries, d5max: int | None = None) -> CohomologySeries:
    if s.prefactor_applied:
        raise ValueError("twist expects the prefactor to be symbolic")
    n = s.d5max if d5max is None else min(d5max, s.d5max)
    blocks: dict[tuple[Sector, int], HPoly] = {}
    factors: dict[tuple[int, int], HPoly] = {}
    for g in s.sectors():
        top = g.dim(s.space)
        for d5 in s.degrees(g):
            if d5 > n:
                continue
            key = (d5, top)
            if key not in factors:
                factors[key] = modification_factor(d5, top)
            blocks[(g, d5)] = s.hpoly(g, d5) * factors[key]
    return CohomologySeries.from_hpolys(s.space, n, blocks)


def pullback_to_w(s: CohomologySeries) -> CohomologySeries:
    """Restrict a Y-series to W: sectors need two zeros, H-powers cap at dim W."""
    if s.space != "Y":
        raise ValueError("pullback expects a series on Y")
    terms = {
        (g, d5, p): v
        for (g, d5, p), v in s.terms.items()
        if g.zero_count >= 2 and p <= g.dim_w
    }
    return CohomologySeries("W", s.d5max, terms)


def check_supported(g: Sector) -> None:
    if g.zero_count < 2 or g.age > 1:
        raise UnsupportedSector(
            f"sector {g} (age {g.age}, {g.zero_count} zeros) is outside the "
            "implemented range: need age <= 1 and at least two zeros"
        )


def iA(g: Sector, d5max: int) -> CohomologySeries:
    check_supported(g)
    return pullback_to_w(twist(jY(g, d5max)))


def second_sector(g: Sector) -> Sector | None:
    """For dimension-0 age-1 sectors, the partner sector g1 carried by I^A_g."""
    if g.zero_count != 2 or g.age != 1:
        return None
    for c in range(1, N):
        h = g.inverse().shift(c)
        if h.zero_count >= 2:
            return h.inverse()
    return None


def age_one_w_sectors() -> list[Sector]:
    return [g for g in enumerate_sectors("W") if g.age == 1]


def _canonical_perm(g: Sector) -> tuple[Sector, tuple[int, ...]]:
    """(representative, perm) with g == representative.permuted(perm)."""
    rep = Sector(tuple(sorted(g.residues)))
    used = [False] * N
    perm = []
    for x in g.residues:
        for j in range(N):
            if not used[j] and rep[j] == x:
                used[j] = True
                perm.append(j)
                break
    return rep, tuple(perm)


def leading_h0(s: CohomologySeries, g: Sector) -> LogSeries:
    """z^0 H^0 coefficient of the 1_g component, as a pure e-series."""
    return LogSeries.from_eseries(
        {d5: s.coefficient(g, d5, 0).coefficient(0) for d5 in s.degrees(g)}, s.d5max
    )


def normalization(g: Sector, d5max: int, series: CohomologySeries | None = None) -> LogSeries:
    """H_g: F_0 for g = e and G_g for the age-1 sectors."""
    s = series if series is not None else iA(g, d5max)
    return leading_h0(s, g)


@dataclass(frozen=True)
class MirrorData:
    d5max: int
    F0: LogSeries
    G0: LogSeries
    Gg: Mapping[Sector, LogSeries] = field(default_factory=dict)
    tau: LogSeries = field(default=None)  # type: ignore[assignment]

    def tau_full(self) -> LogSeries:
        return self.tau + LogSeries.t(self.d5max)

    def to_json(self) -> dict:
        return {
            "d5max": self.d5max,
            "F0": self.F0.to_json(),
            "G0": self.G0.to_json(),
            "Gg": {str(g): self.Gg[g].to_json() for g in sorted(self.Gg)},
            "tau": self.tau.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "MirrorData":
        n = int(data["d5max"])
        return cls(
            n,
            LogSeries.from_json(data["F0"], n),
            LogSeries.from_json(data["G0"], n),
            {Sector.parse(k): LogSeries.from_json(v, n) for k, v in data["Gg"].items()},
            LogSeries.from_json(data["tau"], n),
        )


def f0_g0(s: CohomologySeries) -> tuple[LogSeries, LogSeries]:
    """F_0 and G_0 from a series on the untwisted sector."""
    n = s.d5max
    f0 = leading_h0(s, IDENTITY)
    rest = LogSeries.from_eseries(
        {d5: s.coefficient(IDENTITY, d5, 1).coefficient(-1) for d5 in s.degrees(IDENTITY)}, n
    )
    return f0, LogSeries.t(n) * f0 + rest


def extract_mirror_data(d5max: int, with_twisted: bool = True) -> MirrorData:
    f0, g0 = f0_g0(iA(IDENTITY, d5max))
    tau = (g0 / f0) - LogSeries.t(d5max)
    gg: dict[Sector, LogSeries] = {}
    if with_twisted:
        by_shape: dict[Sector, LogSeries] = {}
        for g in age_one_w_sectors():
            rep, _ = _canonical_perm(g)
            if rep not in by_shape:
                by_shape[rep] = normalization(rep, d5max)
            gg[g] = by_shape[rep]
    return MirrorData(d5max, f0, g0, gg, tau)


def jW(g: Sector, d5max: int) -> CohomologySeries:
    """I^A_g / H_g in the t-coordinate."""
    s = iA(g, d5max)
    return s.div_eseries(normalization(g, d5max, s))


# mirror map -----------------------------------------------------------------


def _pure(coeffs: Mapping[int, Fraction], n: int) -> LogSeries:
    return LogSeries.from_eseries(coeffs, n)


def _exp_pure(f: LogSeries) -> LogSeries:
    """exp(f) for a pure e-series without constant term."""
    if f.coefficient(0, 0):
        raise ValueError("exp needs a series without constant term")
    n = f.d5max
    out = LogSeries.constant(1, n)
    term = LogSeries.constant(1, n)
    k = 1
    while not term.is_zero() and k <= n:
        term = term * f * Fraction(1, k)
        out = out + term
        k += 1
    return out


def _compose_pure(a: LogSeries, u: LogSeries) -> LogSeries:
    """a(u) where a is a pure series in e^(t/5) and u = e^(t/5)*(unit)."""
    n = min(a.d5max, u.d5max)
    out = LogSeries(d5max=n)
    power = LogSeries.constant(1, n)
    top = max((d5 for _, d5 in a.terms), default=0)
    for m in range(top + 1):
        c = a.coefficient(0, m)
        if c:
            out = out + power * c
        power = power * u
    return out


def substitute(s: LogSeries, b: LogSeries) -> LogSeries:
    """Rewrite s(x) in a new coordinate y where x = y + b(y).

    ``b`` is a pure series in e^(y/5) with no constant term; the result is a
    LogSeries whose t-powers and exponentials refer to y.
    """
    n = min(s.d5max, b.d5max)
    ex = _exp_pure(b * Fraction(1, N))  # e^(x/5) = e^(y/5) * ex
    y = LogSeries.t(n)
    x = y + b
    xpow = [LogSeries.constant(1, n)]
    for _ in range(max((a for a, _ in s.terms), default=0)):
        xpow.append(xpow[-1] * x)
    out = LogSeries(d5max=n)
    epow: dict[int, LogSeries] = {}
    for (a, d5), c in s.terms.items():
        if d5 not in epow:
            # e^(d5 x/5) = e^(d5 y/5) * ex^d5
            epow[d5] = _shift(_power(ex, d5), d5)
        out = out + xpow[a] * epow[d5] * c
    return out


def _power(f: LogSeries, k: int) -> LogSeries:
    out = LogSeries.constant(1, f.d5max)
    for _ in range(k):
        out = out * f
    return out


def _shift(f: LogSeries, d5: int) -> LogSeries:
    return LogSeries({(a, m + d5): c for (a, m), c in f.terms.items()}, f.d5max)


def forward_substitute(m: MirrorData, s: LogSeries) -> LogSeries:
    """Rewrite a series in tau as a series in t using tau = t + A(t)."""
    return substitute(s, m.tau)


def inverse_correction(m: MirrorData) -> LogSeries:
    """B with t = tau + B(tau), as a pure series in e^(tau/5)."""
    n = m.d5max
    a = m.tau
    v = _pure({1: 1}, n)
    u = v
    # fixed point: u = v * exp(-A(u)/5); each pass fixes one more degree
    for _ in range(n + 1):
        nxt = v * _exp_pure(_compose_pure(a, u) * Fraction(-1, N))
        if nxt == u:
            break
        u = nxt
    return -_compose_pure(a, u)


def invert_mirror_map(m: MirrorData, s: LogSeries) -> LogSeries:
    """Re-expand a series in t in the mirror coordinate tau."""
    return substitute(s, inverse_correction(m))


# equivariant rows -------------------------------------------------------------


@dataclass(frozen=True)
class EquivariantContext:
    lambdas: tuple[Fraction, ...]

    def __post_init__(self):
        lam = tuple(Fraction(x) for x in self.lambdas)
        if len(lam) != N:
            raise ValueError("need exactly five weights")
        if len(set(lam)) != N:
            raise SingularWeights(f"weights {self.lambdas} are not pairwise distinct")
        object.__setattr__(self, "lambdas", lam)

    @classmethod
    def parse(cls, text: str) -> "EquivariantContext":
        return cls(tuple(Fraction(x) for x in text.split(",")))


def fixed_point_partner(g: Sector, i: int) -> Sector:
    """The unique h with [h] = [g]^-1 and r_i(h) = 0."""
    return g.inverse().shift(g[i])


@dataclass(frozen=True)
class EquivariantYRow:
    i: int
    g: Sector
    h: Sector
    coeffs: Mapping[int, RationalFunction]

    def coefficient(self, c: int) -> RationalFunction:
        return self.coeffs.get(c, RationalFunction.constant(0, "z"))


def row_coefficient(d5: int, h: Sector, i: int, lam: Sequence[Fraction]) -> RationalFunction:
    den = Polynomial.constant(1, "z")
    for b5, k in s_set5(d5, h):
        den = den * Polynomial((lam[i] - lam[k], Fraction(b5, N)), "z")
    return RationalFunction(Polynomial.constant(Y_PAIRING_CONSTANT, "z"), den)


def equivariant_y_row(
    i: int, g: Sector, ctx: EquivariantContext, c_max: int, h: Sector | None = None
) -> EquivariantYRow:
    if h is None:
        h = fixed_point_partner(g, i)
    elif degree_class5(h, g) is None or h[i] != 0:
        raise BadFixedPoint(f"index {i} is not a fixed point of sector {h} for g = {g}")
    coeffs: dict[int, RationalFunction] = {}
    d5 = _offset5(h, g)
    while True:
        c = c_count(d5, h)
        if c > c_max:
            break
        coeffs[c] = coeffs.get(c, RationalFunction.constant(0, "z")) + row_coefficient(
            d5, h, i, ctx.lambdas
        )
        d5 += N
    return EquivariantYRow(i, g, h, coeffs)


def _c_factor(i: int, k: int, b5: int, h: Sector, lam: Sequence[Fraction]) -> tuple[Fraction, Fraction]:
    """(w, K) with C^{i,k}_b(z) = K * z / (z - w)."""
    b = Fraction(b5, N)
    w = (lam[k] - lam[i]) / b
    prod = Fraction(1)
    for a5, l in s_set5(b5, h):
        if (a5, l) == (b5, k):
            continue
        f = Fraction(a5, N) + b * (lam[i] - lam[l]) / (lam[k] - lam[i])
        if f == 0:
            raise SingularWeights(
                f"C-coefficient vanishes: i={i}, k={k}, b={b}, factor ({Fraction(a5, N)}, {l})"
            )
        prod *= f
    return w, 1 / (b * prod)


def check_recursion(
    g: Sector,
    ctx: EquivariantContext,
    c_max: int,
    rows: Mapping[int, EquivariantYRow] | None = None,
    report: list | None = None,
) -> bool:
    """Verify the fixed-point recursion for every fixed-point index and Q^C, C <= c_max.

    ``rows`` may replace the closed-form rows (used to confirm the checker
    notices corrupted input).  Mismatches are appended to ``report`` as
    (i, C, expected, actual) when a list is given.
    """
    if g.zero_count == 0:
        raise EmptySector(f"sector {g} has no fixed points on Y")
    lam = ctx.lambdas
    if rows is None:
        rows = {i: equivariant_y_row(i, g, ctx, c_max) for i in range(N)}
    ok = True
    for i in range(N):
        h = rows[i].h
        # rhs[C] maps a pole w to the residue A_w; the Q^C part is
        # z^(1-C) * sum_w A_w / (z - w), plus the delta term at C = 0
        rhs: dict[int, dict[Fraction, Fraction]] = {}
        for k in range(N):
            if k == i:
                continue
            b5 = h[k] if h[k] else N
            while c_count(b5, h) <= c_max:
                w, kf = _c_factor(i, k, b5, h, lam)
                cb = c_count(b5, h)
                for c2, y in rows[k].coeffs.items():
                    cc = cb + c2
                    if cc > c_max or y.is_zero():
                        continue
                    if y.has_pole_at(w):
                        raise SingularWeights(f"row {k} has a pole at z = {w}")
                    poles = rhs.setdefault(cc, {})
                    poles[w] = poles.get(w, Fraction(0)) + kf * y(w) * w ** c2
                b5 += N
        delta = Y_PAIRING_CONSTANT if i in g.fixed_indices else Fraction(0)
        for c in sorted(set(rhs) | set(rows[i].coeffs) | {0}):
            if c > c_max:
                continue
            num, den = _rhs_fraction(c, rhs.get(c, {}), delta if c == 0 else Fraction(0))
            lhs = rows[i].coefficient(c)
            if lhs.num * den != lhs.den * num:
                ok = False
                if report is not None:
                    report.append((i, c, lhs, RationalFunction(num, den)))
    return ok


def _rhs_fraction(c: int, poles: Mapping[Fraction, Fraction], const: Fraction):
    """(num, den) of const + z^(1-c) * sum_w A_w / (z - w), unreduced."""
    z = Polynomial.gen("z")
    ws = [w for w, a in poles.items() if a]
    den = Polynomial.constant(1, "z")
    for w in ws:
        den = den * (z - w)
    num = Polynomial((), "z")
    for w in ws:
        part = Polynomial.constant(poles[w], "z")
        for w2 in ws:
            if w2 != w:
                part = part * (z - w2)
        num = num + part
    if c >= 1:
        den = den * z ** (c - 1)
    else:
        num = num * z ** (1 - c)
    return num + den * const, den


def series_json(s: CohomologySeries) -> dict:
    return {"space": s.space, "d5max": s.d5max, "terms": s.to_json()}


__all__ = [
    "EquivariantContext",
    "EquivariantYRow",
    "MirrorData",
    "age_one_w_sectors",
    "check_recursion",
    "equivariant_y_row",
    "extract_mirror_data",
    "f0_g0",
    "forward_substitute",
    "frac_str",
    "iA",
    "invert_mirror_map",
    "jW",
    "jY",
    "modification_factor",
    "normalization",
    "pullback_to_w",
    "second_sector",
    "series_json",
    "substitute",
    "twist",
]
