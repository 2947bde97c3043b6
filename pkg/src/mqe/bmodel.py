"""B-model: Griffiths-Dwork reduction for Q_psi = sum x_i^5 - psi x_0 x_1 x_2 x_3 x_4.

A period symbol [r]_k stands for the period of x^r / Q_psi^k times the
standard volume form, with sum(r) = 5(k - 1).  Integrating by parts against
the partial derivatives of Q_psi gives, for any index i and r = s - 4 e_i,

    [s]_{k+1} = (psi/5) [r + 1 - e_i]_{k+1} + (r_i / (5k)) [r - e_i]_k

(the last term drops out when r_i = 0).  Repeated use of this rule brings
every symbol down to the canonical set of tuples with all entries <= 3.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .amodel import check_supported
from .errors import NoRelationFound, ReductionDiverged, SingularElimination
from .rings.poly import Polynomial, RationalFunction
from .rings.series import CohomologySeries, DifferentialOperator, HPoly, frac_str
from .sectors import N, Sector

log = logging.getLogger(__name__)

PSI = "psi"
DEFAULT_CAP = 10_000
STRATEGIES = ("leftmost", "largest")
CANONICAL_MAX = 3


def _rf(c) -> RationalFunction:
    if isinstance(c, RationalFunction):
        return c
    if isinstance(c, Polynomial):
        return RationalFunction(c)
    return RationalFunction.constant(c, PSI)


_ONE = RationalFunction.constant(1, PSI)
_PSI = RationalFunction.gen(PSI)
_PSI5 = _PSI * Fraction(1, N)


@dataclass(frozen=True, order=True)
class PeriodSymbol:
    exponents: tuple[int, ...]

    def __post_init__(self):
        e = tuple(int(x) for x in self.exponents)
        if len(e) != N or any(x < 0 for x in e):
            raise ValueError(f"exponents must be five nonnegative integers, got {e}")
        if sum(e) % N:
            raise ValueError(f"exponent sum {sum(e)} is not a multiple of 5")
        object.__setattr__(self, "exponents", e)

    @property
    def pole_order(self) -> int:
        return sum(self.exponents) // N + 1

    @property
    def class_key(self) -> tuple[int, ...]:
        """Differences r_i - r_0 mod 5; unchanged by every rewrite."""
        e = self.exponents
        return tuple((x - e[0]) % N for x in e)

    def is_canonical(self) -> bool:
        return max(self.exponents) <= CANONICAL_MAX

    def bump(self) -> "PeriodSymbol":
        return PeriodSymbol(tuple(x + 1 for x in self.exponents))

    def __str__(self):
        return f"[{','.join(map(str, self.exponents))}]_{self.pole_order}"


class PeriodCombination:
    """Finite Q(psi)-linear combination of period symbols in one class."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[PeriodSymbol, object] | None = None):
        clean: dict[PeriodSymbol, RationalFunction] = {}
        key = None
        for s, c in (terms or {}).items():
            c = _rf(c)
            if c.is_zero():
                continue
            if key is None:
                key = s.class_key
            elif s.class_key != key:
                raise ValueError(f"symbol {s} is not congruent to the rest of the combination")
            clean[s] = c
        self.terms = clean

    @classmethod
    def single(cls, s: PeriodSymbol, c=1) -> "PeriodCombination":
        return cls({s: c})

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, s: PeriodSymbol) -> RationalFunction:
        return self.terms.get(s, RationalFunction.constant(0, PSI))

    def __eq__(self, other):
        if not isinstance(other, PeriodCombination):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "PeriodCombination") -> "PeriodCombination":
        out = dict(self.terms)
        for s, c in other.terms.items():
            out[s] = out[s] + c if s in out else c
        return PeriodCombination(out)

    def scale(self, f) -> "PeriodCombination":
        f = _rf(f)
        return PeriodCombination({s: c * f for s, c in self.terms.items()})

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*{s}" for s, c in sorted(self.terms.items()))


def _pick(s: PeriodSymbol, strategy: str) -> int:
    e = s.exponents
    if strategy == "leftmost":
        return next(i for i, x in enumerate(e) if x > CANONICAL_MAX)
    if strategy == "largest":
        m = max(e)
        return e.index(m)
    raise ValueError(f"unknown strategy {strategy!r}")


@dataclass
class Reducer:
    """Stateful reduction with memoisation, a rewrite cap and a trace."""

    strategy: str = "leftmost"
    cap: int = DEFAULT_CAP
    rewrites: int = 0
    trace: list = field(default_factory=list)
    memo: dict = field(default_factory=dict)

    def _step(self, s: PeriodSymbol, i: int):
        self.rewrites += 1
        if self.rewrites > self.cap:
            raise ReductionDiverged(f"more than {self.cap} rewrites while reducing {s}")
        e = list(s.exponents)
        k = s.pole_order - 1
        ri = e[i] - 4
        same = PeriodSymbol(tuple(x + 1 for x in e[:i]) + (e[i] - 4,) + tuple(x + 1 for x in e[i + 1:]))
        if ri == 0:
            self.trace.append(("degenerate", s, i))
            low = None
        else:
            self.trace.append(("general", s, i))
            low_e = list(e)
            low_e[i] -= N
            low = (Fraction(ri, N * k), PeriodSymbol(tuple(low_e)))
        assert same.class_key == s.class_key and same.pole_order == s.pole_order
        if low is not None:
            assert low[1].class_key == s.class_key and low[1].pole_order == k
        return same, low

    def reduce_symbol(self, s: PeriodSymbol) -> dict[PeriodSymbol, RationalFunction]:
        if s.is_canonical():
            return {s: _ONE}
        if s in self.memo:
            return self.memo[s]
        chain = [s]
        where = {s: 0}
        lowers = []
        while True:
            same, low = self._step(chain[-1], _pick(chain[-1], self.strategy))
            lowers.append(low)
            if same.is_canonical() or same in self.memo or same in where:
                break
            where[same] = len(chain)
            chain.append(same)
        lower_vals = []
        for low in lowers:
            if low is None:
                lower_vals.append({})
            else:
                coef, sym = low
                lower_vals.append(_scaled(self.reduce_symbol(sym), coef))
        m = len(chain)
        values: list = [None] * (m + 1)
        if same in where:
            j0 = where[same]
            length = m - j0
            acc: dict = {}
            factor = _ONE
            for j in range(j0, m):
                acc = _add(acc, _scaled(lower_vals[j], factor))
                factor = factor * _PSI5
            denom = _ONE - factor
            if denom.is_zero():
                raise ReductionDiverged(f"degenerate cycle of length {length} at {same}")
            self.trace.append(("cycle", same, length))
            values[m] = _scaled(acc, denom.inverse())
        elif same.is_canonical():
            values[m] = {same: _ONE}
        else:
            values[m] = self.memo[same]
        for j in range(m - 1, -1, -1):
            values[j] = _add(lower_vals[j], _scaled(values[j + 1], _PSI5))
            self.memo[chain[j]] = values[j]
        return values[0]

    def reduce(self, c: PeriodCombination) -> PeriodCombination:
        out: dict = {}
        for s, f in c.terms.items():
            out = _add(out, _scaled(self.reduce_symbol(s), f))
        return PeriodCombination(out)


def _scaled(d: Mapping, f) -> dict:
    return {s: c * f for s, c in d.items()}


def _add(a: Mapping, b: Mapping) -> dict:
    out = dict(a)
    for s, c in b.items():
        if s in out:
            v = out[s] + c
            if v.is_zero():
                del out[s]
            else:
                out[s] = v
        elif not c.is_zero():
            out[s] = c
    return out


def reduce_high_powers(
    c: PeriodCombination,
    strategy: str = "leftmost",
    cap: int = DEFAULT_CAP,
    trace: list | None = None,
) -> PeriodCombination:
    r = Reducer(strategy=strategy, cap=cap)
    out = r.reduce(c)
    if trace is not None:
        trace.extend(r.trace)
    log.debug("reduction used %d rewrites", r.rewrites)
    return out


def psi_derivative(c: PeriodCombination) -> PeriodCombination:
    """d/dpsi, using d/dpsi [P]_k = k [P + (1,1,1,1,1)]_{k+1}."""
    out = PeriodCombination()
    for s, f in c.terms.items():
        out = out + PeriodCombination({s: f.derivative(), s.bump(): f * s.pole_order})
    return out


def canonical_symbols(key: tuple[int, ...]) -> list[PeriodSymbol]:
    """Canonical symbols (entries <= 3) in the congruence class ``key``."""
    out = []
    for a in range(N):
        e = tuple((a + x) % N for x in key)
        if max(e) <= CANONICAL_MAX and sum(e) % N == 0:
            out.append(PeriodSymbol(e))
    return sorted(out, key=lambda s: (s.pole_order, s.exponents))


# linear algebra over Q(psi) -----------------------------------------------------


def _poly_lcm(a: Polynomial, b: Polynomial) -> Polynomial:
    return (a * b).exact_div(a.gcd(b))


def _bareiss_kernel(cols: list[list[Polynomial]]) -> list[RationalFunction] | None:
    """A kernel vector with last entry 1 of the polynomial matrix with these columns.

    Returns None when the columns are independent.  Forward elimination is
    fraction free; the back substitution runs over Q(psi).
    """
    ncols = len(cols)
    nrows = len(cols[0]) if cols else 0
    m = [[cols[j][i] for j in range(ncols)] for i in range(nrows)]
    prev = Polynomial.constant(1, PSI)
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if not m[i][c].is_zero()), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                try:
                    m[i][j] = (p * m[i][j] - m[i][c] * m[r][j]).exact_div(prev)
                except ArithmeticError as exc:
                    raise SingularElimination(f"inexact Bareiss step at ({i}, {j})") from exc
            m[i][c] = Polynomial((), PSI)
        prev = p
        pivots.append((r, c))
        r += 1
        if r == nrows:
            break
    pivot_cols = [c for _, c in pivots]
    if len(pivots) == ncols:
        return None
    free = [c for c in range(ncols) if c not in pivot_cols]
    if free != [ncols - 1]:
        raise SingularElimination(f"unexpected free columns {free}; earlier columns dependent")
    y: list[RationalFunction] = [RationalFunction.constant(0, PSI)] * ncols
    y[ncols - 1] = _ONE
    for row, c in reversed(pivots):
        acc = RationalFunction.constant(0, PSI)
        for j in range(c + 1, ncols):
            if not m[row][j].is_zero():
                acc = acc + RationalFunction(m[row][j]) * y[j]
        y[c] = -acc / RationalFunction(m[row][c])
    return y


@dataclass(frozen=True)
class PFResult:
    sector: Sector
    order: int
    operator_psi: tuple[Polynomial, ...]
    operator_t: DifferentialOperator
    trace: tuple = ()

    def to_json(self) -> dict:
        return {
            "sector": str(self.sector),
            "order": self.order,
            "operator_t": self.operator_t.to_json(),
            "operator_psi": [
                {"i": i, "num": [frac_str(c) for c in p.coeffs], "den": ["1/1"]}
                for i, p in enumerate(self.operator_psi)
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PFResult":
        ops = []
        for row in sorted(data["operator_psi"], key=lambda r: r["i"]):
            num = Polynomial([Fraction(x) for x in row["num"]], PSI)
            den = Polynomial([Fraction(x) for x in row["den"]], PSI)
            ops.append(num.exact_div(den))
        return cls(
            Sector.parse(data["sector"]),
            int(data["order"]),
            tuple(ops),
            DifferentialOperator.from_json(data["operator_t"]),
        )


def expected_order(g: Sector) -> int:
    """4 for the untwisted sector, 2 for every age-1 sector."""
    return 4 if g.zero_count == N else 2


def psi_to_t(coeffs: Iterable[Polynomial]) -> DifferentialOperator:
    """Rewrite sum f_i(psi) (d/dpsi)^i in t = -5 log psi and normalise.

    Uses psi^i (d/dpsi)^i = theta (theta - 1) ... (theta - i + 1) with
    theta = psi d/dpsi = -5 D, and psi^m = e^(-m t/5).  The result is made
    primitive in Q[e^(t/5)] and scaled so the e^0 part of the top D-power is 1.
    """
    terms: dict[tuple[int, int], Fraction] = {}
    for i, f in enumerate(coeffs):
        falling = DifferentialOperator.identity()
        for j in range(i):
            falling = falling.compose(DifferentialOperator({(1, 0): -N, (0, 0): -j}))
        for m, a in enumerate(f.coeffs):
            if not a:
                continue
            for (p, _), b in falling.terms.items():
                key = (p, i - m)
                terms[key] = terms.get(key, 0) + a * b
    op = DifferentialOperator(terms)
    if op.is_zero():
        raise NoRelationFound("zero operator")
    shift = -min(d5 for _, d5 in op.terms)
    op = op.mul_exp(shift)
    # content in Q[u], u = e^(t/5)
    polys = []
    for p in range(op.order + 1):
        cp = op.coefficient_poly(p)
        if cp:
            polys.append(Polynomial([cp.get(d, 0) for d in range(max(cp) + 1)], "u"))
    g = polys[0]
    for q in polys[1:]:
        g = g.gcd(q)
    if g.degree > 0:
        out: dict = {}
        for p in range(op.order + 1):
            cp = op.coefficient_poly(p)
            if not cp:
                continue
            q = Polynomial([cp.get(d, 0) for d in range(max(cp) + 1)], "u").exact_div(g)
            for d, c in enumerate(q.coeffs):
                if c:
                    out[(p, d)] = c
        op = DifferentialOperator(out)
        shift = -min(d5 for _, d5 in op.terms)
        op = op.mul_exp(shift)
    return op.normalized()


def derive_pf(
    g: Sector, max_order: int = 6, strategy: str = "leftmost", cap: int = DEFAULT_CAP
) -> PFResult:
    """Minimal Picard-Fuchs operator of psi * [g]_{age+1}."""
    check_supported(g)
    reducer = Reducer(strategy=strategy, cap=cap)
    seed = PeriodCombination.single(PeriodSymbol(g.residues), _PSI)
    basis = canonical_symbols(PeriodSymbol(g.residues).class_key)
    index = {s: j for j, s in enumerate(basis)}
    cols: list[list[Polynomial]] = []
    dens: list[Polynomial] = []
    current = seed
    for n in range(max_order + 1):
        red = reducer.reduce(current)
        den = Polynomial.constant(1, PSI)
        for c in red.terms.values():
            den = _poly_lcm(den, c.den)
        col = [Polynomial((), PSI)] * len(basis)
        for s, c in red.terms.items():
            if s not in index:
                raise ReductionDiverged(f"reduction left non-canonical symbol {s}")
            col[index[s]] = c.num * den.exact_div(c.den)
        cols.append(col)
        dens.append(den)
        kernel = _bareiss_kernel(cols)
        if kernel is not None:
            break
        current = psi_derivative(current)
    else:
        raise NoRelationFound(f"no relation among the first {max_order + 1} derivatives of {g}")
    # kernel of scaled columns -> coefficients of the derivatives themselves
    f = [y * RationalFunction(d) for y, d in zip(kernel, dens)]
    common = Polynomial.constant(1, PSI)
    for c in f:
        common = _poly_lcm(common, c.den)
    nums = [c.num * common.exact_div(c.den) for c in f]
    content = Polynomial((), PSI)
    for p in nums:
        content = content.gcd(p) if not content.is_zero() else p.monic()
    nums = [p.exact_div(content) for p in nums]
    order = len(nums) - 1
    if order != expected_order(g):
        raise NoRelationFound(f"found order {order} for {g}, expected {expected_order(g)}")
    return PFResult(g, order, tuple(nums), psi_to_t(nums), tuple(reducer.trace))


# I^B ---------------------------------------------------------------------------


def _b_factor_product(d5: int, top: int, groups: Iterable[tuple[int, int]]) -> HPoly:
    """prod_{m<=5d} (5H + m z) / prod over groups of (H + b z)^mult.

    ``groups`` lists (r, mult) meaning all 0 < b <= d with 5b = r mod 5.
    """
    out = HPoly.one(top)
    for m in range(1, d5 + 1):
        out = out * HPoly.linear(5, m, top)
    for r, mult in groups:
        for b5 in range(1, d5 + 1):
            if b5 % N == r % N:
                inv = HPoly.inverse_linear(Fraction(b5, N), top)
                for _ in range(mult):
                    out = out * inv
    return out


def _nonzero_values(g: Sector) -> list[int]:
    return [x for x in g.residues if x]


def b_sector_data(g: Sector) -> list[tuple[Sector, int, list[tuple[int, int]]]]:
    """(sector, d5 offset, denominator groups) for each component of I^B_g."""
    check_supported(g)
    if g.zero_count == N:
        return [(g, 0, [(0, 5)])]
    if g.zero_count == 3:
        r1, r2 = _nonzero_values(g)
        return [(g, 0, [(0, 3), (r2, 1), (r1, 1)])]
    vals = _nonzero_values(g)
    r1 = next(x for x in vals if vals.count(x) == 2)
    r2 = next(x for x in vals if vals.count(x) == 1)
    g1 = Sector(
        tuple((-r1) % N if x == 0 else (0 if x == r1 else (r2 - r1) % N) for x in g.residues)
    )
    return [
        (g, 0, [(0, 2), ((3 * r2) % N, 2), ((2 * r1) % N, 1)]),
        (g1, r1 % N, [(r1, 2), (0, 2), (r2, 1)]),
    ]


def iB(g: Sector, d5max: int) -> CohomologySeries:
    """I^B_g from the explicit hypergeometric formulas."""
    blocks: dict[tuple[Sector, int], HPoly] = {}
    for sector, offset, groups in b_sector_data(g):
        top = sector.dim_w
        for d5 in range(offset, d5max + 1, N):
            blocks[(sector, d5)] = _b_factor_product(d5, top, groups)
    return CohomologySeries.from_hpolys("W", d5max, blocks)


__all__ = [
    "PFResult",
    "PeriodCombination",
    "PeriodSymbol",
    "Reducer",
    "b_sector_data",
    "canonical_symbols",
    "derive_pf",
    "iB",
    "psi_derivative",
    "psi_to_t",
    "reduce_high_powers",
]
