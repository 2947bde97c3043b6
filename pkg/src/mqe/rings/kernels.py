"""Pure-Python polynomial kernels over Q.

Polynomials are sequences of Fractions, constant term first, with no
trailing zeros.  Products and remainders are done on integer numerators over
a common denominator, which avoids a gcd per coefficient operation.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm


def _to_int(p):
    den = 1
    for a in p:
        den = lcm(den, a.denominator)
    return [a.numerator * (den // a.denominator) for a in p], den


def _strip(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def poly_add(p, q):
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for i, b in enumerate(q):
        out[i] = out[i] + b
    return _strip(out)


def int_conv(a, b):
    """Integer convolution of two coefficient lists."""
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def poly_mul(p, q):
    if not p or not q:
        return []
    a, da = _to_int(p)
    b, db = _to_int(q)
    den = da * db
    return _strip([Fraction(c, den) for c in int_conv(a, b)])


def poly_divmod(p, q):
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    if len(p) < len(q):
        return [], list(p)
    # pseudo-division on integers: lc^k * p = quot * q + rem
    a, da = _to_int(p)
    b, db = _to_int(q)
    lc = b[-1]
    m = len(b) - 1
    rem = list(a)
    nq = len(a) - m
    quot = [Fraction(0)] * nq
    for i in range(nq - 1, -1, -1):
        c = rem[i + m]
        if c == 0:
            continue
        f = Fraction(c, lc)
        quot[i] = f
        if f.denominator == 1:
            fi = f.numerator
            for j in range(m + 1):
                rem[i + j] -= fi * b[j]
        else:
            rem = [Fraction(x) for x in rem]
            for j in range(m + 1):
                rem[i + j] -= f * b[j]
    # quotient in original scaling: p/q = (a/da)/(b/db)
    scale = Fraction(db, da)
    quot = [x * scale for x in quot]
    rem = [Fraction(x, da) for x in rem[:m]]
    return _strip(quot), _strip(rem)


def _primitive(a):
    from math import gcd

    g = 0
    for x in a:
        g = gcd(g, x)
    if g == 0:
        return a
    if a[-1] < 0:
        g = -g
    return [x // g for x in a]


def poly_gcd(p, q):
    """Monic gcd via the primitive polynomial remainder sequence."""
    if not p:
        return [Fraction(1)] if not q else [x / q[-1] for x in q]
    if not q:
        return [x / p[-1] for x in p]
    a = _primitive(_to_int(p)[0])
    b = _primitive(_to_int(q)[0])
    if len(a) < len(b):
        a, b = b, a
    while b:
        # integer pseudo-remainder
        r = list(a)
        lc = b[-1]
        m = len(b) - 1
        while len(r) - 1 >= m and r:
            c = r[-1]
            shift = len(r) - 1 - m
            r = [x * lc for x in r]
            for j in range(m + 1):
                r[shift + j] -= c * b[j]
            r.pop()
            _strip(r)
        a, b = b, _primitive(r) if r else []
    lc = a[-1]
    return [Fraction(x, lc) for x in a]
