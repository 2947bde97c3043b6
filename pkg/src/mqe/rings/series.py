"""Truncated series types used by the A- and B-model engines.

``ZLaurent``
    finite Laurent polynomial in z.
``HPoly``
    polynomial in the hyperplane class H with ZLaurent coefficients,
    truncated above a nilpotency bound (H^(top+1) = 0).
``CohomologySeries``
    sum over (sector, d5, H-power) of ZLaurent coefficients, i.e. a
    cohomology-valued series in e^(t/5) with the prefactor e^(tH/z) kept
    symbolic.
``LogSeries``
    finite sum of c * t^a * e^(d5 t / 5).
``DifferentialOperator``
    finite sum of f * e^(d5 t / 5) * D^i with D = d/dt.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Iterable, Iterator, Mapping

from ..errors import DivisionByNonUnit, NotInvertible, TruncationMismatch
from ..sectors import Sector

MAX_T_POWER = 4


def frac_str(x: Fraction | int) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_frac(s: str) -> Fraction:
    return Fraction(s)


class ZLaurent:
    """Immutable finite map z-exponent -> nonzero Fraction."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, Fraction] | None = None):
        self.terms: dict[int, Fraction] = {
            int(e): Fraction(c) for e, c in (terms or {}).items() if c != 0
        }

    @classmethod
    def _raw(cls, terms: dict) -> "ZLaurent":
        z = cls.__new__(cls)
        z.terms = terms
        return z

    @classmethod
    def monomial(cls, c, e: int = 0) -> "ZLaurent":
        return cls({e: c})

    @classmethod
    def zero(cls) -> "ZLaurent":
        return cls._raw({})

    @classmethod
    def one(cls) -> "ZLaurent":
        return cls._raw({0: Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def coefficient(self, e: int) -> Fraction:
        return self.terms.get(e, Fraction(0))

    def __eq__(self, other):
        if isinstance(other, ZLaurent):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == ZLaurent.monomial(other).terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ZLaurent.monomial(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return ZLaurent._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return ZLaurent._raw({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ZLaurent.monomial(other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return ZLaurent.zero()
            return ZLaurent._raw({e: c * other for e, c in self.terms.items()})
        if not isinstance(other, ZLaurent):
            return NotImplemented
        out: dict[int, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return ZLaurent._raw({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def shift(self, n: int) -> "ZLaurent":
        """Multiply by z^n."""
        return ZLaurent._raw({e + n: c for e, c in self.terms.items()})

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def inverse(self) -> "ZLaurent":
        if not self.is_monomial():
            raise NotInvertible(f"{self} is not a unit in Q[z, 1/z]")
        (e, c), = self.terms.items()
        return ZLaurent._raw({-e: 1 / c})

    def at_one(self) -> Fraction:
        return sum(self.terms.values(), Fraction(0))

    def exponents(self) -> list[int]:
        return sorted(self.terms)

    def to_json(self) -> list[dict]:
        return [{"exp": e, "coeff": frac_str(self.terms[e])} for e in sorted(self.terms)]

    @classmethod
    def from_json(cls, data: Iterable[dict]) -> "ZLaurent":
        return cls({int(d["exp"]): parse_frac(d["coeff"]) for d in data})

    def __repr__(self):
        return f"ZLaurent({ {e: str(c) for e, c in sorted(self.terms.items())} })"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "" if e == 0 else ("z" if e == 1 else f"z^{e}")
            parts.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(parts)


class HPoly:
    """Polynomial in H over Q[z, 1/z] with H^(top+1) = 0."""

    __slots__ = ("coeffs", "top")

    def __init__(self, coeffs: Iterable[ZLaurent], top: int):
        c = list(coeffs)[: top + 1]
        c += [ZLaurent.zero()] * (top + 1 - len(c))
        self.coeffs: tuple[ZLaurent, ...] = tuple(c)
        self.top = top

    @classmethod
    def one(cls, top: int) -> "HPoly":
        return cls([ZLaurent.one()], top)

    @classmethod
    def linear(cls, h_coeff, z_coeff, top: int) -> "HPoly":
        """h_coeff * H + z_coeff * z."""
        return cls([ZLaurent.monomial(z_coeff, 1), ZLaurent.monomial(h_coeff, 0)], top)

    @classmethod
    def inverse_linear(cls, b, top: int, h_coeff=1) -> "HPoly":
        """1 / (h_coeff*H + b*z), expanded exactly using nilpotency of H."""
        b = Fraction(b)
        if b == 0:
            raise NotInvertible("H is nilpotent; 1/H does not exist")
        a = Fraction(h_coeff)
        return cls(
            [ZLaurent.monomial((-a) ** j / b ** (j + 1), -(j + 1)) for j in range(top + 1)],
            top,
        )

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, HPoly):
            return NotImplemented
        return self.top == other.top and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.top))

    def __add__(self, other):
        top = min(self.top, other.top)
        return HPoly([a + b for a, b in zip(self.coeffs, other.coeffs)], top)

    def __neg__(self):
        return HPoly([-a for a in self.coeffs], self.top)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, ZLaurent)):
            return HPoly([a * other for a in self.coeffs], self.top)
        if not isinstance(other, HPoly):
            return NotImplemented
        top = min(self.top, other.top)
        out = [ZLaurent.zero()] * (top + 1)
        for i, a in enumerate(self.coeffs[: top + 1]):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs[: top + 1 - i]):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return HPoly(out, top)

    __rmul__ = __mul__

    def truncate(self, top: int) -> "HPoly":
        return HPoly(self.coeffs[: top + 1], min(top, self.top))

    def inverse(self) -> "HPoly":
        """Inverse when the H^0 coefficient is a unit of Q[z, 1/z]."""
        a0 = self.coeffs[0]
        inv0 = a0.inverse()
        # (a0 + N)^-1 = a0^-1 * sum (-N a0^-1)^j, N nilpotent
        n = HPoly([ZLaurent.zero()] + list(self.coeffs[1:]), self.top) * (-inv0)
        acc = HPoly.one(self.top)
        term = HPoly.one(self.top)
        for _ in range(self.top):
            term = term * n
            acc = acc + term
        return acc * inv0

    def at_one(self) -> list[Fraction]:
        return [c.at_one() for c in self.coeffs]

    def __repr__(self):
        return f"HPoly({list(map(str, self.coeffs))}, top={self.top})"


def _check_space(a: "CohomologySeries", b: "CohomologySeries") -> None:
    if a.space != b.space or a.prefactor_applied != b.prefactor_applied:
        raise TruncationMismatch(
            f"incompatible series: space {a.space}/{b.space}, "
            f"prefactor {a.prefactor_applied}/{b.prefactor_applied}"
        )


@dataclass(frozen=True)
class CohomologySeries:
    """Sum of ZLaurent(z) * e^(d5 t/5) * 1_sector * H^p, truncated at d5max."""

    space: str
    d5max: int
    terms: Mapping[tuple[Sector, int, int], ZLaurent] = field(default_factory=dict)
    prefactor_applied: bool = False

    def __post_init__(self):
        clean = {}
        for (g, d5, p), c in self.terms.items():
            if c.is_zero() or d5 > self.d5max:
                continue
            if p < 0 or p > g.dim(self.space):
                continue
            clean[(g, d5, p)] = c
        object.__setattr__(self, "terms", clean)

    @classmethod
    def zero(cls, space: str, d5max: int) -> "CohomologySeries":
        return cls(space, d5max, {})

    @classmethod
    def from_hpolys(
        cls, space: str, d5max: int, blocks: Mapping[tuple[Sector, int], HPoly]
    ) -> "CohomologySeries":
        terms = {}
        for (g, d5), hp in blocks.items():
            for p, c in enumerate(hp.coeffs):
                if not c.is_zero():
                    terms[(g, d5, p)] = c
        return cls(space, d5max, terms)

    def sectors(self) -> list[Sector]:
        return sorted({g for g, _, _ in self.terms})

    def degrees(self, sector: Sector | None = None) -> list[int]:
        return sorted({d5 for g, d5, _ in self.terms if sector is None or g == sector})

    def hpoly(self, sector: Sector, d5: int) -> HPoly:
        top = sector.dim(self.space)
        return HPoly(
            [self.terms.get((sector, d5, p), ZLaurent.zero()) for p in range(top + 1)],
            top,
        )

    def coefficient(self, sector: Sector, d5: int, p: int) -> ZLaurent:
        return self.terms.get((sector, d5, p), ZLaurent.zero())

    def truncate(self, d5max: int) -> "CohomologySeries":
        return CohomologySeries(
            self.space, min(d5max, self.d5max), self.terms, self.prefactor_applied
        )

    def __eq__(self, other):
        if not isinstance(other, CohomologySeries):
            return NotImplemented
        return (
            self.space == other.space
            and self.d5max == other.d5max
            and self.prefactor_applied == other.prefactor_applied
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.space, self.d5max, frozenset(self.terms.items())))

    def __add__(self, other):
        _check_space(self, other)
        n = min(self.d5max, other.d5max)
        out = {k: v for k, v in self.terms.items() if k[1] <= n}
        for k, v in other.terms.items():
            if k[1] <= n:
                out[k] = out.get(k, ZLaurent.zero()) + v
        return CohomologySeries(self.space, n, out, self.prefactor_applied)

    def __neg__(self):
        return CohomologySeries(
            self.space, self.d5max, {k: -v for k, v in self.terms.items()}, self.prefactor_applied
        )

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f: ZLaurent | Fraction | int) -> "CohomologySeries":
        return CohomologySeries(
            self.space, self.d5max, {k: v * f for k, v in self.terms.items()}, self.prefactor_applied
        )

    def mul_eseries(self, f: "LogSeries") -> "CohomologySeries":
        """Multiply by a scalar series in e^(t/5) (no t-powers)."""
        if any(a for a, _ in f.terms):
            raise ValueError("only pure e^(t/5)-series act on cohomology series")
        n = min(self.d5max, f.d5max)
        out: dict = {}
        for (g, d5, p), v in self.terms.items():
            for (_, m), c in f.terms.items():
                if d5 + m <= n:
                    key = (g, d5 + m, p)
                    out[key] = out.get(key, ZLaurent.zero()) + v * c
        return CohomologySeries(self.space, n, out, self.prefactor_applied)

    def div_eseries(self, f: "LogSeries") -> "CohomologySeries":
        return self.mul_eseries(f.inverse_unit())

    def product(self, other: "CohomologySeries") -> "CohomologySeries":
        """Graded product where one factor acts through the untwisted sector.

        Terms 1_e H^a * 1_g H^b give 1_g H^(a+b), dropped once a+b exceeds the
        fixed-locus dimension of g.  Products of two twisted classes are not
        needed by this package and raise ValueError.
        """
        _check_space(self, other)
        n = min(self.d5max, other.d5max)
        out: dict = {}
        e = Sector((0, 0, 0, 0, 0))
        for (g1, d1, p1), v1 in self.terms.items():
            for (g2, d2, p2), v2 in other.terms.items():
                if d1 + d2 > n:
                    continue
                if g1 == e:
                    g = g2
                elif g2 == e:
                    g = g1
                else:
                    raise ValueError("product of two twisted-sector classes is not supported")
                p = p1 + p2
                if p > g.dim(self.space):
                    continue
                key = (g, d1 + d2, p)
                out[key] = out.get(key, ZLaurent.zero()) + v1 * v2
        return CohomologySeries(self.space, n, out, self.prefactor_applied)

    def items(self) -> Iterator[tuple[tuple[Sector, int, int], ZLaurent]]:
        for k in sorted(self.terms):
            yield k, self.terms[k]

    def to_json(self) -> list[dict]:
        return [
            {"sector": str(g), "d5": d5, "hPower": p, "z": v.to_json()}
            for (g, d5, p), v in self.items()
        ]

    @classmethod
    def from_json(
        cls, data: Iterable[dict], space: str, d5max: int, prefactor_applied: bool = False
    ) -> "CohomologySeries":
        terms = {}
        for row in data:
            g = Sector.parse(row["sector"])
            terms[(g, int(row["d5"]), int(row["hPower"]))] = ZLaurent.from_json(row["z"])
        return cls(space, d5max, terms, prefactor_applied)


def expand_prefactor(s: CohomologySeries) -> dict[tuple[Sector, int], "LogSeries"]:
    """Components of e^(tH) * s on each 1_g H^p, with z set to 1."""
    if s.prefactor_applied:
        raise ValueError("prefactor already expanded")
    at_one: dict[tuple[Sector, int], dict[int, Fraction]] = {}
    for (g, d5, p), v in s.terms.items():
        at_one.setdefault((g, p), {})
        val = v.at_one()
        if val:
            at_one[(g, p)][d5] = at_one[(g, p)].get(d5, 0) + val
    out = {}
    for g in s.sectors():
        for p in range(g.dim(s.space) + 1):
            terms: dict[tuple[int, int], Fraction] = {}
            for j in range(p + 1):
                fact = factorial(p - j)
                for d5, c in at_one.get((g, j), {}).items():
                    key = (p - j, d5)
                    terms[key] = terms.get(key, 0) + Fraction(c) / fact
            out[(g, p)] = LogSeries(terms, s.d5max)
    return out


class LogSeries:
    """sum c[a, d5] * t^a * e^(d5 t/5), truncated above d5max."""

    __slots__ = ("terms", "d5max")

    def __init__(self, terms: Mapping[tuple[int, int], Fraction] | None = None, d5max: int = 0):
        clean = {}
        for (a, d5), c in (terms or {}).items():
            if c == 0 or d5 > d5max:
                continue
            if a < 0 or a > MAX_T_POWER:
                raise ValueError(f"t-power {a} outside 0..{MAX_T_POWER}")
            if d5 < 0:
                raise ValueError("negative e-degree")
            clean[(int(a), int(d5))] = Fraction(c)
        self.terms: dict[tuple[int, int], Fraction] = clean
        self.d5max = d5max

    @classmethod
    def constant(cls, c, d5max: int) -> "LogSeries":
        return cls({(0, 0): c}, d5max)

    @classmethod
    def t(cls, d5max: int) -> "LogSeries":
        return cls({(1, 0): 1}, d5max)

    @classmethod
    def from_eseries(cls, coeffs: Mapping[int, Fraction], d5max: int) -> "LogSeries":
        return cls({(0, d5): c for d5, c in coeffs.items()}, d5max)

    def coefficient(self, a: int, d5: int) -> Fraction:
        return self.terms.get((a, d5), Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def is_pure(self) -> bool:
        return all(a == 0 for a, _ in self.terms)

    def eseries(self, a: int = 0) -> dict[int, Fraction]:
        """Coefficients of t^a as a map d5 -> coefficient."""
        return {d5: c for (aa, d5), c in self.terms.items() if aa == a}

    def truncate(self, d5max: int) -> "LogSeries":
        return LogSeries(self.terms, min(d5max, self.d5max))

    def __eq__(self, other):
        if not isinstance(other, LogSeries):
            return NotImplemented
        return self.d5max == other.d5max and self.terms == other.terms

    def __hash__(self):
        return hash((self.d5max, frozenset(self.terms.items())))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LogSeries.constant(other, self.d5max)
        n = min(self.d5max, other.d5max)
        out = {k: v for k, v in self.terms.items() if k[1] <= n}
        for k, v in other.terms.items():
            if k[1] <= n:
                out[k] = out.get(k, 0) + v
        return LogSeries(out, n)

    __radd__ = __add__

    def __neg__(self):
        return LogSeries({k: -v for k, v in self.terms.items()}, self.d5max)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LogSeries.constant(other, self.d5max)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return LogSeries({k: v * other for k, v in self.terms.items()}, self.d5max)
        if not isinstance(other, LogSeries):
            return NotImplemented
        n = min(self.d5max, other.d5max)
        out: dict = {}
        for (a1, d1), c1 in self.terms.items():
            for (a2, d2), c2 in other.terms.items():
                if d1 + d2 <= n:
                    key = (a1 + a2, d1 + d2)
                    out[key] = out.get(key, 0) + c1 * c2
        return LogSeries(out, n)

    __rmul__ = __mul__

    def inverse_unit(self) -> "LogSeries":
        """1/f for a pure e-series with constant term nonzero."""
        if not self.is_pure() or self.coefficient(0, 0) == 0:
            raise DivisionByNonUnit("series is not a unit of Q[[e^(t/5)]]")
        f = self.eseries(0)
        c0 = f[0]
        inv = {0: 1 / c0}
        for n in range(1, self.d5max + 1):
            acc = Fraction(0)
            for m, c in f.items():
                if 0 < m <= n and (n - m) in inv:
                    acc += c * inv[n - m]
            if acc:
                inv[n] = -acc / c0
        return LogSeries.from_eseries(inv, self.d5max)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return self * other.inverse_unit()

    def derivative(self) -> "LogSeries":
        """d/dt."""
        out: dict = {}
        for (a, d5), c in self.terms.items():
            if a:
                out[(a - 1, d5)] = out.get((a - 1, d5), 0) + a * c
            if d5:
                out[(a, d5)] = out.get((a, d5), 0) + c * Fraction(d5, 5)
        return LogSeries(out, self.d5max)

    def leading_term(self) -> tuple[tuple[int, int], Fraction] | None:
        if not self.terms:
            return None
        k = min(self.terms, key=lambda k: (k[1], -k[0]))
        return k, self.terms[k]

    def to_json(self) -> list[dict]:
        return [
            {"a": a, "d5": d5, "coeff": frac_str(self.terms[(a, d5)])}
            for a, d5 in sorted(self.terms, key=lambda k: (k[1], k[0]))
        ]

    @classmethod
    def from_json(cls, data: Iterable[dict], d5max: int) -> "LogSeries":
        return cls({(int(r["a"]), int(r["d5"])): parse_frac(r["coeff"]) for r in data}, d5max)

    def __repr__(self):
        return f"LogSeries({self}, d5max={self.d5max})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for a, d5 in sorted(self.terms, key=lambda k: (k[1], k[0])):
            c = self.terms[(a, d5)]
            factors = []
            if a:
                factors.append("t" if a == 1 else f"t^{a}")
            if d5:
                factors.append(_exp_str(d5))
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts).replace("+ -", "- ")


def _exp_str(d5: int) -> str:
    if d5 == 5:
        return "e^t"
    if d5 % 5 == 0:
        return f"e^({d5 // 5}t)"
    return f"e^({Fraction(d5, 5)}t)"


class DifferentialOperator:
    """sum f[i, d5] * e^(d5 t/5) * D^i, coefficients on the left."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int], Fraction] | None = None):
        self.terms: dict[tuple[int, int], Fraction] = {
            (int(i), int(d5)): Fraction(c) for (i, d5), c in (terms or {}).items() if c != 0
        }

    @classmethod
    def from_d_polynomial(cls, coeffs: Iterable, d5: int = 0) -> "DifferentialOperator":
        """e^(d5 t/5) * sum coeffs[i] D^i."""
        return cls({(i, d5): c for i, c in enumerate(coeffs)})

    @classmethod
    def identity(cls) -> "DifferentialOperator":
        return cls({(0, 0): 1})

    @property
    def order(self) -> int:
        return max((i for i, _ in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, DifferentialOperator):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return DifferentialOperator(out)

    def __neg__(self):
        return DifferentialOperator({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "DifferentialOperator":
        return DifferentialOperator({k: v * c for k, v in self.terms.items()})

    def mul_exp(self, d5: int) -> "DifferentialOperator":
        """Left multiplication by e^(d5 t/5)."""
        return DifferentialOperator({(i, m + d5): c for (i, m), c in self.terms.items()})

    def compose(self, other: "DifferentialOperator") -> "DifferentialOperator":
        """self o other, using D e^(ct) = e^(ct) (D + c)."""
        out: dict = {}
        for (i, m), a in self.terms.items():
            for (j, n), b in other.terms.items():
                # D^i e^(n t/5) = e^(n t/5) (D + n/5)^i
                shift = Fraction(n, 5)
                for k in range(i + 1):
                    coef = a * b * _binom(i, k) * shift ** (i - k)
                    if coef:
                        key = (k + j, m + n)
                        out[key] = out.get(key, 0) + coef
        return DifferentialOperator(out)

    def __mul__(self, other):
        if isinstance(other, DifferentialOperator):
            return self.compose(other)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = scale

    def apply(self, s: LogSeries) -> LogSeries:
        derivs = [s]
        for _ in range(self.order):
            derivs.append(derivs[-1].derivative())
        out: dict = {}
        for (i, m), c in self.terms.items():
            for (a, d5), v in derivs[i].terms.items():
                if d5 + m <= s.d5max:
                    key = (a, d5 + m)
                    out[key] = out.get(key, 0) + c * v
        return LogSeries(out, s.d5max)

    def coefficient_poly(self, i: int) -> dict[int, Fraction]:
        """Coefficient of D^i as a map d5 -> rational."""
        return {m: c for (j, m), c in self.terms.items() if j == i}

    def normalized(self) -> "DifferentialOperator":
        """Scale so the e^0 part of the top D-power is 1."""
        if not self.terms:
            return self
        top = self.order
        lead = self.terms.get((top, 0))
        if lead is None:
            m = min(d5 for (i, d5) in self.terms if i == top)
            lead = self.terms[(top, m)]
        return self.scale(1 / lead)

    def to_json(self) -> list[dict]:
        return [
            {"dPower": i, "d5": d5, "coeff": frac_str(self.terms[(i, d5)])}
            for i, d5 in sorted(self.terms, key=lambda k: (-k[0], k[1]))
        ]

    @classmethod
    def from_json(cls, data: Iterable[dict]) -> "DifferentialOperator":
        return cls({(int(r["dPower"]), int(r["d5"])): parse_frac(r["coeff"]) for r in data})

    def __repr__(self):
        return f"DifferentialOperator({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for i in sorted({i for i, _ in self.terms}, reverse=True):
            poly = self.coefficient_poly(i)
            inner = []
            for d5 in sorted(poly):
                c = poly[d5]
                if d5 == 0:
                    inner.append(str(c))
                else:
                    e = _exp_str(d5)
                    inner.append(e if c == 1 else f"{c} {e}")
            coeff = " + ".join(inner).replace("+ -", "- ")
            dpart = "" if i == 0 else ("D" if i == 1 else f"D^{i}")
            if len(inner) > 1:
                coeff = f"({coeff})"
            if not dpart:
                pieces.append(coeff)
            elif coeff == "1":
                pieces.append(dpart)
            elif coeff == "-1":
                pieces.append(f"-{dpart}")
            else:
                pieces.append(f"{coeff} {dpart}")
        return " + ".join(pieces).replace("+ -", "- ")


def _binom(n: int, k: int) -> int:
    from math import comb

    return comb(n, k)
