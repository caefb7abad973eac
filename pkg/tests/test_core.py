import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gisieve.core import (
    GaussianInt,
    IMAG,
    ONE,
    ZERO,
    div_rem,
    divisors,
    elements_with_norm,
    gcd,
    residue_system,
    totient,
)
from gisieve.rng import Lcg64

gi = st.builds(GaussianInt, st.integers(-100, 100), st.integers(-100, 100))
gi_nonzero = gi.filter(lambda g: not g.is_zero())


def canonical_moduli(max_norm, min_norm=1):
    out = []
    for n in range(min_norm, max_norm + 1):
        out.extend(elements_with_norm(n))
    return out


def test_norm_trace_conj_examples():
    assert GaussianInt(3, 4).norm == 25
    assert ZERO.norm == 0
    assert GaussianInt(1, 1).norm == 2
    assert GaussianInt(3, 4).trace == 6
    assert GaussianInt(1, 1) * GaussianInt(1, -1) == GaussianInt(2, 0)
    assert GaussianInt(2, 1).conj() == GaussianInt(2, -1)


def test_norm_multiplicative_random_sample():
    rng = Lcg64(1234)
    for _ in range(10_000):
        a = GaussianInt(rng.next_int(-100, 100), rng.next_int(-100, 100))
        b = GaussianInt(rng.next_int(-100, 100), rng.next_int(-100, 100))
        assert (a * b).norm == a.norm * b.norm


def test_div_rem_examples():
    quo, rem = div_rem(GaussianInt(5, 0), GaussianInt(2, 1))
    assert rem == ZERO and quo == GaussianInt(2, -1)
    assert GaussianInt(2, -1) * GaussianInt(2, 1) == GaussianInt(5, 0)
    assert div_rem(ONE, ONE) == (ONE, ZERO)
    quo, rem = div_rem(GaussianInt(3, 2), GaussianInt(2, 0))
    assert rem.norm <= 2
    assert GaussianInt(2, 0).divides(GaussianInt(3, 2) - rem)
    # brute force: some representative of the class has norm <= 2
    cands = [
        GaussianInt(3, 2) - GaussianInt(2, 0) * GaussianInt(a, b)
        for a in range(-4, 5)
        for b in range(-4, 5)
    ]
    assert min(c.norm for c in cands) <= 2


def test_div_rem_zero_modulus():
    with pytest.raises(ValueError, match="zero modulus"):
        div_rem(ONE, ZERO)


@given(gi, gi_nonzero)
def test_div_rem_contract(a, q):
    quo, rem = div_rem(a, q)
    assert quo * q + rem == a
    assert 2 * rem.norm <= q.norm


@given(gi, gi_nonzero, gi)
def test_div_rem_class_invariant(a, q, m):
    # congruent inputs produce the identical remainder
    assert div_rem(a, q)[1] == div_rem(a + m * q, q)[1]


def test_gcd_examples():
    assert gcd(GaussianInt(2, 0), GaussianInt(1, 1)) == GaussianInt(1, 1)
    assert gcd(ONE, GaussianInt(7, 2)) == ONE
    assert gcd(GaussianInt(5, 0), GaussianInt(2, 1)) == GaussianInt(2, 1)
    assert gcd(ZERO, ZERO) == ZERO


def brute_common_divisors(a, b):
    cap = min(a.norm, b.norm)
    out = []
    for n in range(1, cap + 1):
        for g in elements_with_norm(n):
            if g.divides(a) and g.divides(b):
                out.append(g)
    return out


def test_gcd_sound_and_maximal_small():
    rng = Lcg64(99)
    pairs = []
    for _ in range(60):
        a = GaussianInt(rng.next_int(-7, 7), rng.next_int(-7, 7))
        b = GaussianInt(rng.next_int(-7, 7), rng.next_int(-7, 7))
        if not a.is_zero() and not b.is_zero() and a.norm <= 60 and b.norm <= 60:
            pairs.append((a, b))
    assert len(pairs) > 30
    for a, b in pairs:
        g = gcd(a, b)
        assert g.divides(a) and g.divides(b)
        for d in brute_common_divisors(a, b):
            assert d.divides(g)


def test_canonical_examples():
    assert GaussianInt(0, -2).canonical() == GaussianInt(2, 0)
    assert GaussianInt(3, 4).canonical() == GaussianInt(3, 4)
    assert GaussianInt(-3, -4).canonical() == GaussianInt(3, 4)


@given(gi_nonzero)
def test_canonical_partitions_associates(g):
    assocs = {g, g * IMAG, -g, -(g * IMAG)}
    canon = {a.canonical() for a in assocs}
    assert len(canon) == 1
    c = canon.pop()
    assert c.re > 0 and c.im >= 0
    assert c.canonical() == c


def test_residue_system_examples():
    assert len(residue_system(GaussianInt(1, 1))) == 2
    rs2 = residue_system(GaussianInt(2, 0))
    assert len(rs2) == 4
    reduced = rs2.reduced
    assert len(reduced) == 2
    assert all(r.norm % 2 == 1 for r in reduced)
    rs = residue_system(GaussianInt(2, 1))
    assert len(rs) == 5 and len(rs.reduced) == 4


def test_residue_system_census_up_to_200():
    for q in canonical_moduli(200):
        rs = residue_system(q)
        assert len(rs.representatives) == q.norm
        assert len(set(rs.representatives)) == q.norm
        assert list(rs.representatives) == sorted(rs.representatives)


def test_residue_system_pairwise_incongruent_small():
    for q in canonical_moduli(30):
        reps = residue_system(q).representatives
        for i in range(len(reps)):
            for j in range(i + 1, len(reps)):
                assert not q.divides(reps[i] - reps[j])


def test_residue_system_brute_force_census():
    # independent census: classify a covering box purely by pairwise divisibility
    for q in canonical_moduli(20):
        side = 2 * math.isqrt(q.norm) + 2
        classes = []
        for x in range(side):
            for y in range(side):
                g = GaussianInt(x, y)
                for rep in classes:
                    if q.divides(g - rep):
                        break
                else:
                    classes.append(g)
        assert len(classes) == q.norm


def test_totient_examples():
    assert totient(ONE) == 1
    assert totient(GaussianInt(1, 1)) == 1
    assert totient(GaussianInt(3, 0)) == 8


def test_totient_multiplicative():
    mods = canonical_moduli(20, min_norm=2)
    for q1 in mods:
        for q2 in mods:
            if q1.norm * q2.norm <= 400 and gcd(q1, q2).is_unit():
                assert totient(q1 * q2) == totient(q1) * totient(q2)


def test_divisors_examples():
    assert divisors(GaussianInt(2, 0)) == [ONE, GaussianInt(1, 1), GaussianInt(2, 0)]
    assert divisors(ONE) == [ONE]
    assert divisors(GaussianInt(2, 1)) == [ONE, GaussianInt(2, 1)]
    with pytest.raises(ValueError, match="zero input"):
        divisors(ZERO)


def test_divisors_brute_force_oracle():
    # independent oracle scans every canonical candidate, no norm filtering
    rng = Lcg64(7)
    for _ in range(40):
        z = GaussianInt(rng.next_int(-9, 9), rng.next_int(-9, 9))
        if z.is_zero():
            continue
        oracle = [
            g
            for n in range(1, z.norm + 1)
            for g in elements_with_norm(n)
            if g.divides(z)
        ]
        assert divisors(z) == sorted(oracle, key=lambda g: (g.norm, g.re, g.im))


def test_divisor_count_growth_up_to_1e4():
    for z in canonical_moduli(10_000):
        assert len(divisors(z)) ** 2 <= z.norm


def test_is_square_norm():
    assert GaussianInt(3, 4).is_square_norm()
    assert not GaussianInt(1, 1).is_square_norm()
    assert ZERO.is_square_norm()


@settings(max_examples=200)
@given(gi, gi)
def test_hash_eq_order_consistency(a, b):
    if a == b:
        assert hash(a) == hash(b)
    assert (a < b) == ((a.re, a.im) < (b.re, b.im))
