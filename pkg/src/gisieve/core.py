"""Exact arithmetic in the ring of Gaussian integers Z[i].

Everything in this module is pure integer arithmetic.  Python integers never
overflow, so all operations are exact for arbitrarily large coordinates; the
rest of the package uses these primitives for moduli, residues and lattice
frequencies.

Conventions
-----------
* The units of Z[i] are 1, i, -1, -i.  ``GaussianInt.canonical()`` returns
  the unique associate with re > 0 and im >= 0 (and 0 for input 0), so sets
  of moduli or divisors deduplicate deterministically.
* ``div_rem(a, q)`` rounds each coordinate of a*conj(q)/norm(q) to the
  nearest integer with ties toward -infinity.  The remainder then satisfies
  norm(rem) <= norm(q)/2, which both terminates the Euclidean algorithm and
  makes the remainder a class invariant of a mod q (congruent inputs produce
  the identical remainder).
* ``residue_system(q)`` scans the box 0 <= x, y <= 2*ceil(sqrt(norm(q))) in
  lexicographic order and keeps the first representative of each congruence
  class.  The box side exceeds twice the covolume root of the lattice q*Z[i],
  so every class is hit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

__all__ = [
    "GaussianInt",
    "ZERO",
    "ONE",
    "IMAG",
    "ResidueSystem",
    "div_rem",
    "gcd",
    "residue_system",
    "totient",
    "divisors",
    "elements_with_norm",
]


@dataclass(frozen=True, order=True, slots=True)
class GaussianInt:
    """An element re + im*i of Z[i].  Ordering is lexicographic in (re, im)."""

    re: int
    im: int

    # -- ring structure ----------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return GaussianInt(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return GaussianInt(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return GaussianInt(other.re - self.re, other.im - self.im)

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return GaussianInt(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianInt(-self.re, -self.im)

    def __divmod__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return div_rem(self, other)

    def __floordiv__(self, other):
        qr = self.__divmod__(other)
        return qr if qr is NotImplemented else qr[0]

    def __mod__(self, other):
        qr = self.__divmod__(other)
        return qr if qr is NotImplemented else qr[1]

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(self.re, self.im)

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"

    # -- derived quantities --------------------------------------------------

    @property
    def norm(self) -> int:
        """re**2 + im**2, the number of residue classes mod self."""
        return self.re * self.re + self.im * self.im

    @property
    def trace(self) -> int:
        """self + conj(self) = 2*re."""
        return 2 * self.re

    def conj(self) -> "GaussianInt":
        return GaussianInt(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_unit(self) -> bool:
        return self.norm == 1

    def is_square_norm(self) -> bool:
        """True iff the norm is a perfect square (0 counts as 0**2)."""
        n = self.norm
        return math.isqrt(n) ** 2 == n

    def canonical(self) -> "GaussianInt":
        """The unique associate with re > 0 and im >= 0; 0 stays 0."""
        if self.is_zero():
            return self
        g = self
        for _ in range(4):
            if g.re > 0 and g.im >= 0:
                return g
            g = GaussianInt(-g.im, g.re)  # multiply by i
        raise AssertionError("unreachable: one associate is canonical")

    def divides(self, other: "GaussianInt") -> bool:
        if self.is_zero():
            return other.is_zero()
        return div_rem(other, self)[1].is_zero()


def _coerce(x):
    if isinstance(x, GaussianInt):
        return x
    if isinstance(x, int):
        return GaussianInt(x, 0)
    return None


ZERO = GaussianInt(0, 0)
ONE = GaussianInt(1, 0)
IMAG = GaussianInt(0, 1)


def _round_half_down(num: int, den: int) -> int:
    """Nearest integer to num/den (den > 0), ties toward -infinity."""
    return -((den - 2 * num) // (2 * den))


def div_rem(a: GaussianInt, q: GaussianInt) -> tuple[GaussianInt, GaussianInt]:
    """Euclidean division a = quo*q + rem with norm(rem) <= norm(q)/2.

    Both coordinates of a*conj(q)/norm(q) are rounded to the nearest integer,
    ties toward -infinity, so the remainder is unique per congruence class.
    """
    if q.is_zero():
        raise ValueError("zero modulus")
    w = a * q.conj()
    n = q.norm
    quo = GaussianInt(_round_half_down(w.re, n), _round_half_down(w.im, n))
    return quo, a - quo * q


def gcd(a: GaussianInt, b: GaussianInt) -> GaussianInt:
    """Euclidean gcd, returned as the canonical associate; gcd(0, 0) = 0."""
    while not b.is_zero():
        a, b = b, div_rem(a, b)[1]
    return a.canonical()


@dataclass(frozen=True)
class ResidueSystem:
    """A complete residue system mod ``modulus`` with coprimality flags.

    ``representatives`` are pairwise incongruent, sorted lexicographically by
    (re, im), and exactly norm(modulus) many.  ``reduced_flags[k]`` is True
    iff gcd(representatives[k], modulus) is a unit; the True count equals the
    totient.
    """

    modulus: GaussianInt
    representatives: tuple[GaussianInt, ...]
    reduced_flags: tuple[bool, ...]

    @property
    def reduced(self) -> tuple[GaussianInt, ...]:
        return tuple(
            r for r, f in zip(self.representatives, self.reduced_flags) if f
        )

    def __len__(self):
        return len(self.representatives)


@lru_cache(maxsize=None)
def residue_system(q: GaussianInt) -> ResidueSystem:
    """One representative per class mod q, found by a first-seen box scan."""
    if q.is_zero():
        raise ValueError("zero modulus")
    n = q.norm
    side = 2 * math.isqrt(n)
    if side * side < 4 * n:  # 2*ceil(sqrt(n))
        side += 2
    seen: dict[GaussianInt, GaussianInt] = {}
    for x in range(side + 1):
        for y in range(side + 1):
            g = GaussianInt(x, y)
            key = div_rem(g, q)[1]
            if key not in seen:
                seen[key] = g
    reps = tuple(sorted(seen.values()))
    if len(reps) != n:
        raise AssertionError(f"residue scan found {len(reps)} classes mod {q}, expected {n}")
    flags = tuple(gcd(r, q).is_unit() for r in reps)
    return ResidueSystem(q, reps, flags)


@lru_cache(maxsize=None)
def totient(q: GaussianInt) -> int:
    """Number of reduced residue classes mod q (1 for unit moduli)."""
    if q.is_zero():
        raise ValueError("zero modulus")
    return sum(residue_system(q).reduced_flags)


def _int_divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def elements_with_norm(m: int) -> list[GaussianInt]:
    """All canonical Gaussian integers of norm exactly m (m >= 1), sorted."""
    out = []
    u = 1
    while u * u <= m:
        v2 = m - u * u
        v = math.isqrt(v2)
        if v * v == v2:
            out.append(GaussianInt(u, v))
        u += 1
    return sorted(out)


def divisors(z: GaussianInt) -> list[GaussianInt]:
    """All canonical divisors of z != 0, sorted by (norm, re, im).

    Trial division is restricted to candidates whose norm divides norm(z),
    since d | z forces norm(d) | norm(z).
    """
    if z.is_zero():
        raise ValueError("zero input")
    n = z.norm
    out = []
    for m in _int_divisors(n):
        for g in elements_with_norm(m):
            if g.divides(z):
                out.append(g)
    return sorted(out, key=lambda g: (g.norm, g.re, g.im))
