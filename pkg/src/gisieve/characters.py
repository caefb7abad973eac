"""Characters on Z[i]/(q) and Gauss sums.

Additive characters are indexed by a twist r and evaluate a frequency n to
e(Re(n*r*conj(q)) / norm(q)); the phase numerator is an exact integer, so
well-definedness and orthogonality statements can be checked in rational
arithmetic before anything is rounded to a complex double.

Multiplicative characters are built from an explicit basis of the unit group
(Z[i]/q)^*: a list of generators with orders whose product is the totient,
such that every reduced class is a unique product of generator powers.  The
basis comes from a brute-force abelian decomposition (split into p-primary
parts, peel off a maximal-order element, recurse on the quotient), which is
fine at the desk-scale norm cap of 2000.  A character is "proper" when it is
not induced from any strictly smaller divisor modulus; this is tested
directly against the kernel of each reduction map rather than through a
conductor formula.  Character values carry exact rational phases, so the
properness and orthogonality tests are exact.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .core import (
    GaussianInt,
    ONE,
    ZERO,
    div_rem,
    divisors,
    gcd,
    residue_system,
    totient,
)

__all__ = [
    "UNIT_GROUP_NORM_CAP",
    "AdditiveCharEval",
    "MultiplicativeCharacter",
    "additive_char",
    "additive_char_phase",
    "additive_char_eval",
    "orthogonality_sum",
    "unit_group_structure",
    "character_table",
    "is_proper",
    "gauss_sum",
]

UNIT_GROUP_NORM_CAP = 2000


def e_of(phase: float) -> complex:
    """e(x) = exp(2*pi*i*x)."""
    return cmath.exp(2j * math.pi * phase)


@lru_cache(maxsize=None)
def _phase_table(den: int) -> tuple[complex, ...]:
    """e(j/den) for j = 0..den-1."""
    return tuple(e_of(j / den) for j in range(den))


def additive_char_phase(q: GaussianInt, r: GaussianInt, n: GaussianInt) -> Fraction:
    """Exact phase Re(n*r*conj(q))/norm(q) of the additive character."""
    if q.is_zero():
        raise ValueError("zero modulus")
    return Fraction((n * r * q.conj()).re, q.norm)


def additive_char(q: GaussianInt, r: GaussianInt, n: GaussianInt) -> complex:
    """e(Re(n*r*conj(q))/norm(q)); depends only on n mod q and r mod q."""
    if q.is_zero():
        raise ValueError("zero modulus")
    nq = q.norm
    num = (n * r * q.conj()).re % nq
    return _phase_table(nq)[num]


@dataclass(frozen=True)
class AdditiveCharEval:
    """One additive-character evaluation with its exact phase."""

    modulus: GaussianInt
    twist: GaussianInt
    phase_numerator: int
    phase_denominator: int
    value: complex


def additive_char_eval(q: GaussianInt, r: GaussianInt, n: GaussianInt) -> AdditiveCharEval:
    if q.is_zero():
        raise ValueError("zero modulus")
    nq = q.norm
    num = (n * r * q.conj()).re % nq
    return AdditiveCharEval(q, r, num, nq, _phase_table(nq)[num])


def orthogonality_sum(q: GaussianInt, m: GaussianInt) -> complex:
    """Sum of the additive character over a full residue system.

    Equals norm(q) when q | m and vanishes otherwise (up to float roundoff).
    """
    if q.is_zero():
        raise ValueError("zero modulus")
    return sum(additive_char(q, r, m) for r in residue_system(q).representatives)


# -- unit group decomposition -------------------------------------------------


def _prime_factors(n: int) -> list[tuple[int, int]]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


def _group_pow(mul, x, n: int, e):
    acc = e
    b = x
    while n:
        if n & 1:
            acc = mul(acc, b)
        b = mul(b, b)
        n >>= 1
    return acc


def _p_order(mul, x, e, p: int) -> int:
    o = 1
    y = x
    while y != e:
        y = _group_pow(mul, y, p, e)
        o *= p
    return o


def _p_basis(elems: list, mul, e, p: int) -> list:
    """Basis of a finite abelian p-group given as an element list.

    Peels off an element of maximal order, recurses on the quotient (cosets
    represented by their lexicographically smallest member), and lifts the
    quotient basis back, correcting each lift by a power of the peeled
    generator so orders are preserved and the sum stays direct.
    """
    if len(elems) == 1:
        return []
    orders = {x: _p_order(mul, x, e, p) for x in elems}
    o1 = max(orders.values())
    b1 = min(x for x in elems if orders[x] == o1)
    if o1 == len(elems):  # cyclic: done
        return [(b1, o1)]
    powers = [e]
    while len(powers) < o1:
        powers.append(mul(powers[-1], b1))
    pow_index = {x: i for i, x in enumerate(powers)}

    coset_rep = {x: min(mul(x, s) for s in powers) for x in elems}
    q_elems = sorted(set(coset_rep.values()))
    q_mul = lambda x, y: coset_rep[mul(x, y)]

    basis = [(b1, o1)]
    for g, m in _p_basis(q_elems, q_mul, coset_rep[e], p):
        t = _group_pow(mul, g, m, e)  # lands in <b1>
        s = pow_index[t]
        if s % m:
            raise AssertionError("lift exponent not divisible by quotient order")
        adj = _group_pow(mul, b1, (o1 - (s // m)) % o1, e)
        g2 = mul(g, adj)
        if _p_order(mul, g2, e, p) != m:
            raise AssertionError("corrected lift has wrong order")
        basis.append((g2, m))
    return basis


@lru_cache(maxsize=None)
def unit_group_structure(
    q: GaussianInt,
) -> tuple[tuple[GaussianInt, ...], tuple[int, ...]]:
    """Generators and orders of (Z[i]/q)^* with unique-product structure.

    The orders multiply to totient(q) and every reduced class is a unique
    product of generator powers with exponents below the orders.
    """
    if q.is_zero():
        raise ValueError("zero modulus")
    if q.norm > UNIT_GROUP_NORM_CAP:
        raise ValueError("norm cap exceeded")
    phi = totient(q)
    if phi == 1:
        return (), ()
    rem = lambda g: div_rem(g, q)[1]
    elems = sorted({rem(r) for r in residue_system(q).reduced})
    e = rem(ONE)
    mul = lambda x, y: rem(x * y)

    gens: list[GaussianInt] = []
    orders: list[int] = []
    for p, k in _prime_factors(phi):
        pk = p**k
        cofactor = phi // pk
        part = sorted({_group_pow(mul, x, cofactor, e) for x in elems})
        for g, o in _p_basis(part, mul, e, p):
            gens.append(g)
            orders.append(o)
    if math.prod(orders) != phi:
        raise AssertionError("basis orders do not multiply to the totient")
    return tuple(gens), tuple(orders)


@lru_cache(maxsize=None)
def _dlog_table(q: GaussianInt) -> dict[GaussianInt, tuple[int, ...]]:
    """Map each reduced class (div_rem remainder) to its exponent vector."""
    gens, orders = unit_group_structure(q)
    rem = lambda g: div_rem(g, q)[1]
    mul = lambda x, y: rem(x * y)
    e = rem(ONE)
    table = {e: tuple(0 for _ in orders)}
    for vec in product(*[range(o) for o in orders]):
        x = e
        for g, k in zip(gens, vec):
            x = mul(x, _group_pow(mul, g, k, e))
        table[x] = vec
    if len(table) != totient(q):
        raise AssertionError("exponent vectors do not enumerate the unit group")
    return table


@dataclass(frozen=True, eq=False)
class MultiplicativeCharacter:
    """A character of (Z[i]/q)^*, extended by 0 off the reduced classes.

    ``exponents[k]`` twists the k-th basis generator by e(exponents[k]/order).
    Values are complex doubles; ``phase_of`` exposes the exact rational phase
    (or None where the character vanishes), which the properness and
    orthogonality logic uses to avoid roundoff.
    """

    modulus: GaussianInt
    generator_orders: tuple[int, ...]
    exponents: tuple[int, ...]
    proper: bool
    _dlog: dict = field(repr=False)
    _order_lcm: int = field(repr=False)

    def _phase_num(self, vec: tuple[int, ...]) -> int:
        L = self._order_lcm
        return (
            sum(e * d * (L // o) for e, d, o in zip(self.exponents, vec, self.generator_orders))
            % L
        )

    def phase_of(self, n: GaussianInt):
        """Exact phase in [0, 1) as a Fraction, or None where the value is 0."""
        if n.is_zero():
            return None
        key = div_rem(n, self.modulus)[1]
        vec = self._dlog.get(key)
        if vec is None:
            return None
        return Fraction(self._phase_num(vec), self._order_lcm)

    def __call__(self, n: GaussianInt) -> complex:
        if n.is_zero():
            return 0j
        key = div_rem(n, self.modulus)[1]
        vec = self._dlog.get(key)
        if vec is None:
            return 0j
        return _phase_table(self._order_lcm)[self._phase_num(vec)]

    def is_trivial(self) -> bool:
        return all(e == 0 for e in self.exponents)


def _kernel_witnesses(q: GaussianInt) -> list[tuple[GaussianInt, list]]:
    """For each proper divisor b of q, the reduced classes that are 1 mod b."""
    rem = lambda g: div_rem(g, q)[1]
    reduced = sorted({rem(r) for r in residue_system(q).reduced})
    out = []
    for b in divisors(q):
        if b.norm >= q.norm:
            continue
        kernel = [x for x in reduced if b.divides(x - ONE)]
        out.append((b, kernel))
    return out


@lru_cache(maxsize=None)
def character_table(q: GaussianInt) -> tuple[MultiplicativeCharacter, ...]:
    """All totient(q) characters mod q, each with its properness flag."""
    if q.norm > UNIT_GROUP_NORM_CAP:
        raise ValueError("norm cap exceeded")
    gens, orders = unit_group_structure(q)
    dlog = _dlog_table(q)
    L = math.lcm(*orders) if orders else 1
    witnesses = _kernel_witnesses(q)

    chars = []
    for exps in product(*[range(o) for o in orders]):
        chi = MultiplicativeCharacter(q, orders, exps, True, dlog, L)
        proper = all(
            any(chi._phase_num(dlog[x]) != 0 for x in kernel)
            for _, kernel in witnesses
        )
        chars.append(
            MultiplicativeCharacter(q, orders, exps, proper, dlog, L)
        )
    return tuple(chars)


def is_proper(q: GaussianInt, chi: MultiplicativeCharacter) -> bool:
    """True iff chi is not induced from any divisor modulus of smaller norm.

    For every canonical divisor b with norm(b) < norm(q) there must be a
    reduced class r = 1 (mod b) on which chi is nontrivial.
    """
    if chi.modulus != q:
        raise ValueError("mismatched modulus")
    for _, kernel in _kernel_witnesses(q):
        if all(chi._phase_num(chi._dlog[x]) == 0 for x in kernel):
            return False
    return True


def gauss_sum(q: GaussianInt, chi: MultiplicativeCharacter) -> complex:
    """Sum over reduced r mod q of chi(r) * e(Re(r*conj(q))/norm(q))."""
    if chi.modulus != q:
        raise ValueError("mismatched modulus")
    return sum(chi(r) * additive_char(q, r, ONE) for r in residue_system(q).reduced)
