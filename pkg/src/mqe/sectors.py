"""Group and inertia-stack combinatorics for G = {(r0..r4) : sum r = 0 mod 5}.

A group element is stored as a 5-tuple of residues in 0..4.  The same tuple
indexes a component of the inertia stack of Y = [P^4 / G-bar] (if it has at
least one zero entry) and of the mirror quintic W (at least two zeros).

Degrees of orbifold maps are multiples of 1/5 and are carried everywhere as
integers ``d5 = 5 * d``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable

from .errors import IncompatiblePair, InvalidSector

N = 5
Y_PAIRING_CONSTANT = Fraction(1, 125)
W_DUALITY_FACTOR = Fraction(25)

SPACES = ("Y", "W")


@dataclass(frozen=True, order=True)
class Sector:
    residues: tuple[int, int, int, int, int]

    def __post_init__(self):
        r = self.residues
        if len(r) != N or any(not (0 <= x < N) for x in r):
            raise InvalidSector(f"residues must be five integers in 0..4, got {r!r}")
        if sum(r) % N:
            raise InvalidSector(f"residue sum {sum(r)} of {r!r} is not 0 mod 5")

    def __str__(self):
        return ",".join(str(x) for x in self.residues)

    def __iter__(self):
        return iter(self.residues)

    def __getitem__(self, i):
        return self.residues[i]

    @classmethod
    def parse(cls, text: str) -> "Sector":
        try:
            values = tuple(int(x) for x in text.replace(" ", "").split(","))
        except ValueError:
            raise InvalidSector(f"cannot parse sector {text!r}") from None
        return make_sector(values)

    @property
    def age(self) -> Fraction:
        return Fraction(sum(self.residues), N)

    @property
    def zero_count(self) -> int:
        return sum(1 for x in self.residues if x == 0)

    @property
    def fixed_indices(self) -> frozenset[int]:
        """I(g): coordinates left free by g."""
        return frozenset(i for i, x in enumerate(self.residues) if x == 0)

    @property
    def dim_y(self) -> int:
        return self.zero_count - 1

    @property
    def dim_w(self) -> int:
        return self.zero_count - 2

    def dim(self, space: str) -> int:
        return self.dim_y if space == "Y" else self.dim_w

    def in_space(self, space: str) -> bool:
        return self.zero_count >= (1 if space == "Y" else 2)

    def inverse(self) -> "Sector":
        return Sector(tuple((-x) % N for x in self.residues))

    def shift(self, c: int) -> "Sector":
        """Add the diagonal element c*(1,1,1,1,1)."""
        return Sector(tuple((x + c) % N for x in self.residues))

    @property
    def shape(self) -> tuple[int, ...]:
        """Permutation class, as the sorted residue tuple."""
        return tuple(sorted(self.residues))

    def permuted(self, perm: Iterable[int]) -> "Sector":
        return Sector(tuple(self.residues[p] for p in perm))


IDENTITY = Sector((0, 0, 0, 0, 0))


def make_sector(residues: Iterable[int]) -> Sector:
    values = tuple(int(x) for x in residues)
    if len(values) != N:
        raise InvalidSector(f"expected 5 residues, got {len(values)}")
    reduced = tuple(x % N for x in values)
    if sum(reduced) % N:
        raise InvalidSector(
            f"residues {values!r} reduce to {reduced!r} with sum {sum(reduced)} not 0 mod 5"
        )
    return Sector(reduced)


def inverse(g: Sector) -> Sector:
    return g.inverse()


def class_representative(g: Sector) -> Sector:
    """Lexicographically least tuple in the coset g + Z(1,1,1,1,1)."""
    return min(g.shift(c) for c in range(N))


def same_class(h: Sector, g: Sector) -> bool:
    return class_representative(h) == class_representative(g)


def _check_space(space: str) -> None:
    if space not in SPACES:
        raise ValueError(f"space must be 'Y' or 'W', got {space!r}")


@lru_cache(maxsize=None)
def all_group_elements() -> tuple[Sector, ...]:
    return tuple(
        Sector(r) for r in product(range(N), repeat=N) if sum(r) % N == 0
    )


@lru_cache(maxsize=None)
def enumerate_sectors(space: str = "W") -> tuple[Sector, ...]:
    _check_space(space)
    return tuple(g for g in all_group_elements() if g.in_space(space))


@dataclass(frozen=True, order=True)
class BasisElement:
    sector: Sector
    h_power: int

    def __str__(self):
        return f"1_[{self.sector}]*H^{self.h_power}"


def cr_basis(space: str = "W") -> list[BasisElement]:
    _check_space(space)
    return [
        BasisElement(g, p)
        for g in enumerate_sectors(space)
        for p in range(g.dim(space) + 1)
    ]


def poincare_dual_w(b: BasisElement) -> tuple[BasisElement, Fraction]:
    """Dual of 1_g H^k on W: 25 * 1_{g^-1} H^{dim W_g - k}."""
    g = b.sector
    if not g.in_space("W") or not 0 <= b.h_power <= g.dim_w:
        raise InvalidSector(f"{b} is not a basis element of H_CR(W)")
    return BasisElement(g.inverse(), g.dim_w - b.h_power), W_DUALITY_FACTOR


def partners(g: Sector, space: str = "Y") -> list[Sector]:
    """All h with [h] = [g]^-1 whose fixed locus is nonempty in ``space``."""
    ginv = g.inverse()
    found = {ginv.shift(c) for c in range(N)}
    return sorted(h for h in found if h.in_space(space))


def degree_compatible(h: Sector, g: Sector) -> Fraction | None:
    """d(h, g) if [h] = [g]^-1 in G-bar, else None."""
    sums = {(a + b) % N for a, b in zip(h.residues, g.residues)}
    if len(sums) != 1:
        return None
    return Fraction(sums.pop(), N)


def degree_class5(h: Sector, g: Sector) -> int | None:
    """5 * d(h, g), or None when incompatible."""
    d = degree_compatible(h, g)
    return None if d is None else int(d * N)


@dataclass(frozen=True)
class DegreeData:
    dhg: Fraction
    s_set: tuple[tuple[Fraction, int], ...]

    @property
    def c_count(self) -> int:
        return len(self.s_set)


@lru_cache(maxsize=None)
def s_set5(d5: int, h: Sector) -> tuple[tuple[int, int], ...]:
    """S(d, h) as pairs (5b, k), ordered by b then k."""
    if d5 < 0:
        raise ValueError("degree must be nonnegative")
    return tuple(
        (b5, k)
        for b5 in range(1, d5 + 1)
        for k in range(N)
        if b5 % N == h.residues[k]
    )


def s_set(d: Fraction | int, h: Sector) -> DegreeData:
    d = Fraction(d)
    d5 = d * N
    if d5.denominator != 1:
        raise ValueError(f"degree {d} is not a multiple of 1/5")
    pairs = tuple((Fraction(b5, N), k) for b5, k in s_set5(int(d5), h))
    return DegreeData(dhg=d - (d.numerator // d.denominator), s_set=pairs)


def c_count(d5: int, h: Sector) -> int:
    """c(d, h) = |S(d, h)| without materialising the set."""
    q, rem = divmod(d5, N)
    return sum(q + (1 if 0 < r <= rem else 0) if r else q for r in h.residues)


def virtual_dim_check(h: Sector, g: Sector, d: Fraction | int) -> tuple[Fraction, bool]:
    """Return (m_d, c(d,h) == m_d - dim Y_h + 1) for a compatible triple."""
    d = Fraction(d)
    dhg = degree_compatible(h, g)
    if dhg is None or (d - dhg).denominator != 1 or d < 0:
        raise IncompatiblePair(f"no maps of degree {d} between {h} and {g}")
    m_d = N * d + 3 - h.age - g.age
    c = c_count(int(d * N), h)
    return m_d, c == m_d - h.dim_y + 1
