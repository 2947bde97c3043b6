"""Cross-checks between the A-model and B-model engines.

Every check returns a :class:`VerificationReport`; a report passes exactly
when it carries no mismatches.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from . import amodel, bmodel
from .errors import SingularWeights
from .rings.poly import Polynomial
from .rings.series import (
    CohomologySeries,
    DifferentialOperator,
    LogSeries,
    expand_prefactor,
    frac_str,
)
from .sectors import (
    IDENTITY,
    N,
    Sector,
    all_group_elements,
    cr_basis,
    degree_class5,
    enumerate_sectors,
    poincare_dual_w,
    virtual_dim_check,
)

SHAPES: tuple[Sector, ...] = tuple(
    Sector(r)
    for r in [(0, 0, 0, 0, 0), (0, 0, 0, 1, 4), (0, 0, 0, 2, 3), (0, 0, 1, 1, 3), (0, 0, 2, 2, 1)]
)

# Picard-Fuchs operators A(D) - 5^5 e^t B(D), listed by the sorted residues
# of the sector: (roots of A, roots of B) with A, B monic.
_REFERENCE_ROOTS: dict[tuple[int, ...], tuple[tuple[Fraction, ...], tuple[Fraction, ...]]] = {
    (0, 0, 0, 0, 0): ((Fraction(0),) * 4, tuple(Fraction(-j, 5) for j in (1, 2, 3, 4))),
    (0, 0, 0, 1, 4): ((Fraction(0),) * 2, (Fraction(-2, 5), Fraction(-3, 5))),
    (0, 0, 0, 2, 3): ((Fraction(0),) * 2, (Fraction(-1, 5), Fraction(-4, 5))),
    (0, 0, 1, 1, 3): ((Fraction(0), Fraction(1, 5)), (Fraction(-1, 5), Fraction(-3, 5))),
    (0, 0, 1, 2, 2): ((Fraction(0), Fraction(2, 5)), (Fraction(-1, 5), Fraction(-2, 5))),
}

DEFAULT_AB_D5MAX = 50
DEFAULT_PF_D5MAX = 125


@dataclass(frozen=True)
class Mismatch:
    where: str
    expected: Fraction
    actual: Fraction

    def to_json(self) -> dict:
        return {"where": self.where, "expected": frac_str(self.expected), "actual": frac_str(self.actual)}


@dataclass
class VerificationReport:
    check: str
    d5max: int
    mismatches: list[Mismatch] = field(default_factory=list)

    @property
    def status(self) -> str:
        return "pass" if not self.mismatches else "fail"

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def add(self, where: str, expected, actual) -> None:
        self.mismatches.append(Mismatch(where, Fraction(expected), Fraction(actual)))

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "status": self.status,
            "d5max": self.d5max,
            "mismatches": [m.to_json() for m in self.mismatches],
        }

    def __str__(self):
        head = f"{self.check}: {self.status} (d5max={self.d5max})"
        lines = [head] + [
            f"  {m.where}: expected {frac_str(m.expected)}, got {frac_str(m.actual)}"
            for m in self.mismatches[:20]
        ]
        if len(self.mismatches) > 20:
            lines.append(f"  ... {len(self.mismatches) - 20} more")
        return "\n".join(lines)


def _series_diff(report: VerificationReport, a: CohomologySeries, b: CohomologySeries) -> None:
    if a.space != b.space:
        report.add(f"space {a.space} vs {b.space}", 0, 1)
        return
    for key in sorted(set(a.terms) | set(b.terms)):
        g, d5, p = key
        za, zb = a.coefficient(g, d5, p), b.coefficient(g, d5, p)
        if za == zb:
            continue
        for e in sorted(set(za.terms) | set(zb.terms)):
            if za.coefficient(e) != zb.coefficient(e):
                report.add(
                    f"sector={g} d5={d5} hPower={p} zexp={e}", za.coefficient(e), zb.coefficient(e)
                )


def compare_ab(g: Sector, d5max: int, b_series: CohomologySeries | None = None) -> VerificationReport:
    """I^A_g against I^B_g, coefficient by coefficient."""
    report = VerificationReport(f"compare-ab[{g}]", d5max)
    a = amodel.iA(g, d5max)
    b = bmodel.iB(g, d5max) if b_series is None else b_series
    _series_diff(report, a, b)
    return report


def pf_annihilates(
    op: DifferentialOperator,
    g: Sector,
    d5max: int,
    guard: int = 1,
    series: CohomologySeries | None = None,
) -> VerificationReport:
    """Apply ``op`` to every component of I^B_g(t, 1); residuals must vanish.

    Residuals are inspected for d5 <= d5max - 5 * order * guard.
    """
    report = VerificationReport(f"pf-annihilation[{g}]", d5max)
    s = bmodel.iB(g, d5max) if series is None else series
    limit = d5max - N * op.order * guard
    for (sector, p), comp in sorted(expand_prefactor(s).items()):
        if comp.is_zero():
            continue
        residual = op.apply(comp)
        bad = sorted((d5, a) for (a, d5) in residual.terms if d5 <= limit)
        if bad:
            d5, a = bad[0]
            report.add(
                f"sector={sector} hPower={p} t^{a} d5={d5}", 0, residual.coefficient(a, d5)
            )
    return report


def _monic_from_roots(roots: Iterable[Fraction]) -> Polynomial:
    out = Polynomial.constant(1, "D")
    for r in roots:
        out = out * Polynomial((-r, 1), "D")
    return out


def reference_operator(g: Sector) -> DifferentialOperator:
    """The hypergeometric operator A(D) - 5^5 e^t B(D) for the shape of g."""
    key = tuple(sorted(g.residues))
    if key not in _REFERENCE_ROOTS:
        raise KeyError(f"no reference operator for sector {g}")
    a_roots, b_roots = _REFERENCE_ROOTS[key]
    a = DifferentialOperator.from_d_polynomial(_monic_from_roots(a_roots).coeffs)
    b = DifferentialOperator.from_d_polynomial(_monic_from_roots(b_roots).coeffs, d5=N)
    return (a - b.scale(N ** N)).normalized()


def match_reference_operator(result: bmodel.PFResult) -> VerificationReport:
    report = VerificationReport(f"pf-operator[{result.sector}]", 0)
    ref = reference_operator(result.sector)
    got = result.operator_t
    for key in sorted(set(ref.terms) | set(got.terms)):
        e, a = ref.terms.get(key, Fraction(0)), got.terms.get(key, Fraction(0))
        if e != a:
            report.add(f"D^{key[0]} e^({key[1]}t/5)", e, a)
    return report


def _rational_roots(p: Polynomial) -> list[Fraction] | None:
    """All roots of p if it splits over Q, with multiplicity; else None."""
    roots: list[Fraction] = []
    while p.degree > 0:
        den = 1
        for c in p.coeffs:
            den = den * c.denominator // gcd(den, c.denominator)
        ints = [int(c * den) for c in p.coeffs]
        lead, const = ints[-1], ints[0]
        if const == 0:
            roots.append(Fraction(0))
            p = Polynomial(p.coeffs[1:], p.var)
            continue
        found = None
        for num in _divisors(abs(const)):
            for dd in _divisors(abs(lead)):
                for cand in (Fraction(num, dd), Fraction(-num, dd)):
                    if p(cand) == 0:
                        found = cand
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            return None
        roots.append(found)
        p = p.exact_div(Polynomial((-found, 1), p.var))
    return roots


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _factor_str(roots: Sequence[Fraction]) -> str:
    out = []
    for r in sorted(roots, key=abs):
        if r == 0:
            out.append("D")
        elif r < 0:
            out.append(f"(D+{-r})")
        else:
            out.append(f"(D-{r})")
    return "".join(out) if out else "1"


def factored_str(op: DifferentialOperator) -> str | None:
    """Render A(D) - c e^t B(D) in factored form when both parts split over Q."""
    degrees = {d5 for _, d5 in op.terms}
    if not degrees <= {0, N}:
        return None
    a = Polynomial([op.terms.get((i, 0), 0) for i in range(op.order + 1)], "D")
    b = Polynomial([op.terms.get((i, N), 0) for i in range(op.order + 1)], "D")
    if a.is_zero() or b.is_zero() or a.leading != 1:
        return None
    ra, rb = _rational_roots(a), _rational_roots(b)
    if ra is None or rb is None:
        return None
    c = -b.leading
    a_str = f"D^{len(ra)}" if all(r == 0 for r in ra) and len(ra) > 1 else _factor_str(ra)
    sign = "-" if c > 0 else "+"
    return f"{a_str} {sign} {abs(c)} e^t {_factor_str(rb)}"


def mirror_consistency(d5max: int, sectors: Iterable[Sector] | None = None) -> VerificationReport:
    report = VerificationReport("mirror-consistency", d5max)
    targets = [IDENTITY] + (list(sectors) if sectors is not None else amodel.age_one_w_sectors())
    for g in targets:
        a = amodel.iA(g, d5max)
        hg = amodel.normalization(g, d5max, a)
        jw = a.div_eseries(hg)
        # (a) J^W_g * H_g reproduces I^A_g
        back = jw.mul_eseries(hg)
        sub = VerificationReport("", d5max)
        _series_diff(sub, a, back)
        for m in sub.mismatches:
            report.add(f"roundtrip[{g}] {m.where}", m.expected, m.actual)
        # (b) the z^0 H^0 part of J^W_g on 1_g is identically 1
        for d5 in range(d5max + 1):
            want = 1 if d5 == 0 else 0
            got = jw.coefficient(g, d5, 0).coefficient(0)
            if got != want:
                report.add(f"normalised[{g}] d5={d5}", want, got)
    # (c) classical quintic data from the B-side series
    b = bmodel.iB(IDENTITY, d5max)
    f0, g0 = amodel.f0_g0(b)
    tau = g0 / f0 - LogSeries.t(d5max)
    expected_f0 = {0: Fraction(1), 5: Fraction(120), 10: Fraction(113400)}
    for d5, want in expected_f0.items():
        if d5 <= d5max and f0.coefficient(0, d5) != want:
            report.add(f"F0 d5={d5}", want, f0.coefficient(0, d5))
    if d5max >= 5 and tau.coefficient(0, 5) != 770:
        report.add("tau d5=5", 770, tau.coefficient(0, 5))
    if tau.coefficient(0, 0) != 0:
        report.add("tau d5=0", 0, tau.coefficient(0, 0))
    return report


def basis_count_check() -> VerificationReport:
    report = VerificationReport("basis-count", 0)
    basis = cr_basis("W")
    if len(basis) != 204:
        report.add("|basis|", 204, len(basis))
    age_one = amodel.age_one_w_sectors()
    counts = Counter(tuple(sorted(g.residues)) for g in age_one)
    want = {(0, 0, 0, 1, 4): 20, (0, 0, 0, 2, 3): 20, (0, 0, 1, 1, 3): 30, (0, 0, 1, 2, 2): 30}
    for shape, n in want.items():
        if counts.get(shape, 0) != n:
            report.add(f"age-1 type {shape}", n, counts.get(shape, 0))
    if set(counts) - set(want):
        report.add("unexpected age-1 types", 0, len(set(counts) - set(want)))
    # degree-2 classes: 1_g H^p has real degree 2(p + age g)
    h11 = sum(1 for b in basis if b.h_power + b.sector.age == 1)
    if h11 != 101:
        report.add("h11", 101, h11)
    # derivative structure: PF order of each form equals its component count
    total = 0
    orders = {shape: bmodel.derive_pf(shape).order for shape in SHAPES}
    for g in [IDENTITY] + age_one:
        shape = Sector(tuple(sorted(g.residues)))
        rep = next(s for s in SHAPES if tuple(sorted(s.residues)) == shape.residues)
        comps = _component_count(g)
        if comps != orders[rep]:
            report.add(f"components[{g}]", orders[rep], comps)
        total += orders[rep]
    if total != 4 + 2 * 100 or total != len(basis):
        report.add("derivative count", len(basis), total)
    # Poincare duality on W is an involution
    for b in basis:
        dual, factor = poincare_dual_w(b)
        back, _ = poincare_dual_w(dual)
        if back != b:
            report.add(f"duality[{b}]", 1, 0)
    return report


def _component_count(g: Sector) -> int:
    """Number of (sector, H-power) slots carrying I^B_g."""
    return sum(sector.dim_w + 1 for sector, _, _ in bmodel.b_sector_data(g))


def dimension_identity_sweep(d_max: int = 3) -> VerificationReport:
    """c(d,h) = m_d - dim Y_h + 1 over all compatible (h, g) with d <= d_max."""
    report = VerificationReport("dimension-identity", N * d_max)
    for h in enumerate_sectors("Y"):
        for g in all_group_elements():
            d5 = degree_class5(h, g)
            if d5 is None:
                continue
            while d5 <= N * d_max:
                m_d, ok = virtual_dim_check(h, g, Fraction(d5, N))
                if not ok:
                    report.add(f"h={h} g={g} d={Fraction(d5, N)}", m_d - h.dim_y + 1, -1)
                d5 += N
    return report


def random_weights(rng: random.Random) -> amodel.EquivariantContext:
    while True:
        lam = tuple(Fraction(rng.randint(-1000, 1000), rng.randint(1, 20)) for _ in range(N))
        if len(set(lam)) == N:
            return amodel.EquivariantContext(lam)


def recursion_check(
    weights: Sequence[amodel.EquivariantContext], c_max: int = 15, sectors: Iterable[Sector] | None = None
) -> VerificationReport:
    report = VerificationReport("localization-recursion", c_max)
    targets = list(sectors) if sectors is not None else [
        g for g in enumerate_sectors("Y") if g.age <= 1
    ]
    for ctx in weights:
        for g in targets:
            bad: list = []
            try:
                amodel.check_recursion(g, ctx, c_max, report=bad)
            except SingularWeights as exc:
                report.add(f"g={g} weights={_fmt(ctx.lambdas)} singular: {exc}", 0, 1)
                continue
            for i, c, lhs, rhs in bad:
                report.add(f"g={g} weights={_fmt(ctx.lambdas)} i={i} Q^{c}", 1, 0)
    return report


def _fmt(lam: Sequence[Fraction]) -> str:
    return ",".join(str(x) for x in lam)


def run_all(
    d5max: int,
    pf_d5max: int | None = None,
    seed: int = 0,
    c_max: int = 15,
    permuted: int = 10,
) -> list[VerificationReport]:
    """Full suite; reports are sorted by check name."""
    rng = random.Random(seed)
    reports: list[VerificationReport] = []
    pf_n = d5max if pf_d5max is None else pf_d5max
    variants = list(SHAPES) + permuted_variants(rng, permuted)
    for g in variants:
        reports.append(compare_ab(g, d5max))
    for g in SHAPES:
        res = bmodel.derive_pf(g)
        reports.append(match_reference_operator(res))
        reports.append(pf_annihilates(res.operator_t, g, pf_n))
    reports.append(mirror_consistency(min(d5max, 10)))
    reports.append(basis_count_check())
    reports.append(dimension_identity_sweep())
    reports.append(recursion_check([random_weights(rng) for _ in range(3)], c_max))
    reports.append(reduction_confluence(rng, 20))
    return sorted(reports, key=lambda r: r.check)


def permuted_variants(rng: random.Random, count: int) -> list[Sector]:
    out: list[Sector] = []
    pool = [g for g in enumerate_sectors("W") if g.age == 1 and g not in SHAPES]
    seen = set()
    while len(out) < min(count, len(pool)):
        g = rng.choice(pool)
        if g not in seen:
            seen.add(g)
            out.append(g)
    return out


def random_symbol(rng: random.Random, key: Sequence[int] | None = None, max_pole: int = 7) -> bmodel.PeriodSymbol:
    """Random period symbol, optionally in a prescribed congruence class."""
    while True:
        if key is None:
            e = [rng.randint(0, 12) for _ in range(N)]
        else:
            a = rng.randint(0, 12)
            e = [a + key[i] + N * rng.randint(0, 2) for i in range(N)]
        if sum(e) % N == 0 and sum(e) // N + 1 <= max_pole:
            return bmodel.PeriodSymbol(tuple(e))


def reduction_confluence(rng: random.Random, count: int = 100) -> VerificationReport:
    report = VerificationReport("reduction-confluence", 0)
    keys = [bmodel.PeriodSymbol(g.residues).class_key for g in SHAPES]
    for _ in range(count):
        s = random_symbol(rng, rng.choice(keys))
        c = bmodel.PeriodCombination.single(s)
        left = bmodel.reduce_high_powers(c, "leftmost")
        big = bmodel.reduce_high_powers(c, "largest")
        if left != big:
            report.add(f"symbol {s}", 1, 0)
    return report
