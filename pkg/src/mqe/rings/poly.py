"""Dense univariate polynomials and rational functions over Q.

Coefficients are :class:`fractions.Fraction`; lists run from the constant
term upward.  Both classes are immutable and hashable, and a
:class:`RationalFunction` is always stored in lowest terms with a monic
denominator, so ``==`` is a canonical comparison.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from . import kernels


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class Polynomial:
    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Iterable = (), var: str = "x"):
        c = [_frac(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(c)
        self.var = var

    @classmethod
    def _raw(cls, coeffs: Sequence[Fraction], var: str) -> "Polynomial":
        p = cls.__new__(cls)
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        p.coeffs = tuple(c)
        p.var = var
        return p

    @classmethod
    def constant(cls, c, var: str = "x") -> "Polynomial":
        return cls((c,), var)

    @classmethod
    def monomial(cls, n: int, c=1, var: str = "x") -> "Polynomial":
        return cls([0] * n + [c], var)

    @classmethod
    def gen(cls, var: str = "x") -> "Polynomial":
        return cls((0, 1), var)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Polynomial.constant(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other, self.var)
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    def __add__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        o = self._coerce(other)
        return Polynomial._raw(kernels.poly_add(self.coeffs, o.coeffs), self.var)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw([-a for a in self.coeffs], self.var)

    def __sub__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Polynomial((), self.var)
            return Polynomial._raw([a * other for a in self.coeffs], self.var)
        o = self._coerce(other)
        return Polynomial._raw(kernels.poly_mul(self.coeffs, o.coeffs), self.var)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Polynomial.constant(1, self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other):
        o = self._coerce(other)
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q, r = kernels.poly_divmod(self.coeffs, o.coeffs)
        return Polynomial._raw(q, self.var), Polynomial._raw(r, self.var)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "Polynomial":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        lc = self.coeffs[-1]
        return Polynomial._raw([a / lc for a in self.coeffs], self.var)

    def gcd(self, other) -> "Polynomial":
        o = self._coerce(other)
        return Polynomial._raw(kernels.poly_gcd(self.coeffs, o.coeffs), self.var)

    def derivative(self) -> "Polynomial":
        return Polynomial._raw(
            [i * a for i, a in enumerate(self.coeffs)][1:], self.var
        )

    def __call__(self, x):
        acc = Fraction(0) if not isinstance(x, Polynomial) else Polynomial((), x.var)
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def compose(self, inner: "Polynomial") -> "Polynomial":
        return self(inner)

    def content(self) -> Fraction:
        """Positive rational c with self / c primitive over Z."""
        from math import gcd, lcm

        if not self.coeffs:
            return Fraction(0)
        num = 0
        den = 1
        for a in self.coeffs:
            num = gcd(num, a.numerator)
            den = lcm(den, a.denominator)
        return Fraction(num, den)

    def __repr__(self):
        return f"Polynomial({[str(a) for a in self.coeffs]}, var={self.var!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            a = self.coeffs[i]
            if a == 0:
                continue
            if i == 0:
                mono = ""
            elif i == 1:
                mono = self.var
            else:
                mono = f"{self.var}^{i}"
            if mono and abs(a) == 1:
                term = mono
            elif mono:
                term = f"{abs(a)}*{mono}"
            else:
                term = str(abs(a))
            sign = "-" if a < 0 else "+"
            parts.append((sign, term))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, term in parts[1:]:
            out += f" {sign} {term}"
        return out


class RationalFunction:
    """num/den in lowest terms, den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, var: str | None = None):
        if not isinstance(num, Polynomial):
            num = Polynomial.constant(num, var or "x")
        if den is None:
            den = Polynomial.constant(1, num.var)
        elif not isinstance(den, Polynomial):
            den = Polynomial.constant(den, num.var)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        v = var or num.var
        if num.is_zero():
            self.num = Polynomial((), v)
            self.den = Polynomial.constant(1, v)
            return
        g = num.gcd(den)
        if g.degree > 0:
            num = num.exact_div(g)
            den = den.exact_div(g)
        lc = den.leading
        self.num = Polynomial._raw([a / lc for a in num.coeffs], v)
        self.den = Polynomial._raw([a / lc for a in den.coeffs], v)

    @classmethod
    def constant(cls, c, var: str = "x") -> "RationalFunction":
        return cls(Polynomial.constant(c, var))

    @classmethod
    def gen(cls, var: str = "x") -> "RationalFunction":
        return cls(Polynomial.gen(var))

    @property
    def var(self) -> str:
        return self.num.var

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction, Polynomial)):
            return self == RationalFunction(other, var=self.var)
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Polynomial):
            return RationalFunction(other)
        if isinstance(other, (int, Fraction)):
            return RationalFunction.constant(other, self.var)
        raise TypeError(f"cannot combine RationalFunction with {type(other).__name__}")

    def __add__(self, other):
        o = self._coerce(other)
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        r = RationalFunction.__new__(RationalFunction)
        r.num = -self.num
        r.den = self.den
        return r

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return RationalFunction.constant(0, self.var)
            r = RationalFunction.__new__(RationalFunction)
            r.num = self.num * other
            r.den = self.den
            return r
        o = self._coerce(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction(self.num ** n, self.den ** n)

    def derivative(self) -> "RationalFunction":
        n, d = self.num, self.den
        return RationalFunction(n.derivative() * d - n * d.derivative(), d * d)

    def __call__(self, x):
        x = _frac(x)
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError(f"pole at {self.var} = {x}")
        return self.num(x) / d

    def has_pole_at(self, x) -> bool:
        return self.den(_frac(x)) == 0

    def __repr__(self):
        return f"RationalFunction({self.num!r}, {self.den!r})"

    def __str__(self):
        if self.den.degree == 0:
            return str(self.num)
        return f"({self.num})/({self.den})"
