"""Exact geometry of the residue phase points.

For a modulus q2 = u2 + v2*i and a coprime twist r2 = x2 + y2*i set

    k = x2*u2 + y2*v2,      l = x2*v2 - y2*u2,

so that k - l*i = r2*conj(q2) and k^2 + l^2 = norm(r2)*norm(q2).  The signed
fractional part f(z) = {z + 1/2} - 1/2 maps each integer pair (u, v) to the
phase point (f((u*k+v*l)/norm(q2)), f((-v*k+u*l)/norm(q2))) in the half-open
unit square.  Two such points either coincide (exactly when q2 divides the
difference (u-u~) + (v-v~)i) or are at squared distance at least 1/norm(q2);
``verify_spacing_lemma`` checks this dichotomy exhaustively.

Everything here is exact: public values are ``fractions.Fraction``; the
exhaustive verifier works with the same rationals scaled by the common
denominator 2*norm(q2), i.e. bounded integers, which numpy's int64 holds
exactly at desk scale.  No floats enter this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import GaussianInt, ONE, div_rem, gcd
from .sieve import ModuliFamily

__all__ = [
    "frac_f",
    "kl_pair",
    "SpacingInstance",
    "f_point",
    "spacing_distance_sq",
    "verify_spacing_lemma",
    "residue_shift",
    "rotation_matrix",
    "f_point_in_disk",
    "DiskCountQuery",
    "disk_point_count",
    "distinct_f_points_in_disk",
    "switch_lattice_check",
    "class_multiplicity_max",
]

Rational = Fraction | int


def frac_f(z: Rational) -> Fraction:
    """Signed fractional part {z + 1/2} - 1/2, in [-1/2, 1/2).

    Periodic with period 1; |frac_f(z)| is the distance from z to the nearest
    integer (the half-integer ties resolve downward).
    """
    z = Fraction(z)
    return z - math.floor(z + Fraction(1, 2))


def _nearest_int(z: Rational) -> int:
    """The integer closest to z under the same tie rule as ``frac_f``."""
    z = Fraction(z)
    return int(z - frac_f(z))


def kl_pair(q2: GaussianInt, r2: GaussianInt) -> tuple[int, int]:
    """(k, l) with k - l*i = r2*conj(q2); requires gcd(r2, q2) a unit."""
    if q2.is_zero():
        raise ValueError("zero modulus")
    if not gcd(r2, q2).is_unit():
        raise ValueError("non-coprime pair")
    k = r2.re * q2.re + r2.im * q2.im
    l = r2.re * q2.im - r2.im * q2.re
    return k, l


@dataclass(frozen=True)
class SpacingInstance:
    """A modulus/twist pair with its derived bilinear forms (k, l)."""

    q2: GaussianInt
    r2: GaussianInt
    k: int
    l: int

    @classmethod
    def make(cls, q2: GaussianInt, r2: GaussianInt) -> "SpacingInstance":
        k, l = kl_pair(q2, r2)
        return cls(q2, r2, k, l)


def f_point(inst: SpacingInstance, u: int, v: int) -> tuple[Fraction, Fraction]:
    """The phase point of (u, v) relative to the instance, exactly."""
    n2 = inst.q2.norm
    return (
        frac_f(Fraction(u * inst.k + v * inst.l, n2)),
        frac_f(Fraction(-v * inst.k + u * inst.l, n2)),
    )


def spacing_distance_sq(
    inst: SpacingInstance,
    uv: tuple[int, int],
    uv_tilde: tuple[int, int],
) -> Fraction:
    """Exact squared distance between the phase points of two integer pairs."""
    a = f_point(inst, *uv)
    b = f_point(inst, *uv_tilde)
    return (a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2


def _scaled_f_values(inst: SpacingInstance, bound: int):
    """2*norm(q2)*f(...) for all |u|, |v| <= bound, as int64 arrays."""
    n2 = inst.q2.norm
    u = np.arange(-bound, bound + 1, dtype=np.int64)
    uu, vv = np.meshgrid(u, u, indexing="ij")
    p1 = uu * inst.k + vv * inst.l
    p2 = -vv * inst.k + uu * inst.l
    m1 = (2 * p1 + n2) % (2 * n2) - n2
    m2 = (2 * p2 + n2) % (2 * n2) - n2
    return uu.ravel(), vv.ravel(), m1.ravel(), m2.ravel()


def verify_spacing_lemma(
    q2: GaussianInt, r2: GaussianInt, coordinate_bound: int
) -> list[tuple]:
    """Exhaustive dichotomy check over all pairs in [-B, B]^4.

    Returns the violations (expected empty): quadruples whose squared phase
    distance is neither 0 (with q2 dividing the difference) nor >= 1/norm(q2).
    Arithmetic is the exact rational computation scaled by 2*norm(q2).
    """
    inst = SpacingInstance.make(q2, r2)
    n2 = q2.norm
    if n2 * coordinate_bound > 2**28:
        raise ValueError("instance too large for the int64 fast path")
    uu, vv, m1, m2 = _scaled_f_values(inst, coordinate_bound)

    # q2 | (du + dv*i) lookup over all coordinate differences
    span = 2 * coordinate_bound
    div_table = np.zeros((2 * span + 1, 2 * span + 1), dtype=bool)
    for du in range(-span, span + 1):
        for dv in range(-span, span + 1):
            div_table[du + span, dv + span] = q2.divides(GaussianInt(du, dv))

    d1 = m1[:, None] - m1[None, :]
    d2 = m2[:, None] - m2[None, :]
    dist = d1 * d1 + d2 * d2  # = (2*n2)^2 * true squared distance
    divisible = div_table[uu[:, None] - uu[None, :] + span, vv[:, None] - vv[None, :] + span]

    bad = ((dist == 0) != divisible) | ((dist != 0) & (dist < 4 * n2))
    violations = []
    for i, j in zip(*np.nonzero(bad)):
        violations.append(
            (
                (int(uu[i]), int(vv[i])),
                (int(uu[j]), int(vv[j])),
                Fraction(int(dist[i, j]), 4 * n2 * n2),
                bool(divisible[i, j]),
            )
        )
    return violations


def residue_shift(
    q1: GaussianInt,
    xy: tuple[int, int],
    target: tuple[Rational, Rational],
) -> tuple[int, int]:
    """Shift (x1, y1) by the lattice moves x += a*u1 + b*v1, y += a*v1 - b*u1.

    The move adds exactly a to (x*u1 + y*v1)/norm(q1) and b to
    (x*v1 - y*u1)/norm(q1); a and b are chosen so both coordinates land at
    nearest-integer distance from the targets.
    """
    if q1.is_zero():
        raise ValueError("zero modulus")
    x1, y1 = xy
    u1, v1 = q1.re, q1.im
    n1 = q1.norm
    c1 = Fraction(x1 * u1 + y1 * v1, n1)
    c2 = Fraction(x1 * v1 - y1 * u1, n1)
    a = -_nearest_int(c1 - Fraction(target[0]))
    b = -_nearest_int(c2 - Fraction(target[1]))
    return (x1 + a * u1 + b * v1, y1 + a * v1 - b * u1)


def rotation_matrix(u: int, v: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """((u, v), (-v, u)); transpose times self is (u^2 + v^2) * identity."""
    if u == 0 and v == 0:
        raise ValueError("zero input")
    return ((u, v), (-v, u))


def _check_disk_radius(radius: Rational) -> Fraction:
    r = Fraction(radius)
    if not (0 < r < Fraction(1, 2)):
        raise ValueError("radius must satisfy 0 < R < 1/2")
    return r


def f_point_in_disk(inst: SpacingInstance, uv: tuple[int, int], radius: Rational) -> bool:
    """Exact test whether the phase point of (u, v) lies in the closed disk."""
    r = _check_disk_radius(radius)
    a, b = f_point(inst, *uv)
    return a * a + b * b <= r * r


@dataclass(frozen=True)
class DiskCountQuery:
    """Count moduli whose phase point falls in the closed origin disk.

    The scanned range is every canonical modulus of ``family``'s kind with
    norm <= L * Q, where Q is the family window's upper edge.
    """

    instance: SpacingInstance
    family: ModuliFamily
    L: float
    radius: Fraction

    def __post_init__(self):
        if self.L < 1:
            raise ValueError("L must be >= 1")
        _check_disk_radius(self.radius)


def disk_point_count(query: DiskCountQuery) -> int:
    cap = query.L * query.family.window[1]
    fam = ModuliFamily(
        query.family.kind, (0, cap), query.family.custom_moduli, query.family.name
    )
    count = 0
    for q in fam.moduli():
        if f_point_in_disk(query.instance, (q.re, q.im), query.radius):
            count += 1
    return count


def distinct_f_points_in_disk(
    inst: SpacingInstance, moduli, radius: Rational
) -> int:
    """Number of distinct phase points inside the closed disk (exact)."""
    r = _check_disk_radius(radius)
    pts = set()
    for q in moduli:
        p = f_point(inst, q.re, q.im)
        if p[0] ** 2 + p[1] ** 2 <= r * r:
            pts.add(p)
    return len(pts)


def switch_lattice_check(inst: SpacingInstance, window_bound: int, radius: Rational) -> bool:
    """Both orders of the neighbor-pair count agree on a finite window.

    Lattice points p(x~, y~) = (x~*k + y~*l, x~*l - y~*k)/norm(q2) and integer
    points z range over [-W, W]^2 parameters; the pairs with |z - p| <= R are
    counted grouping by p first and grouping by z first.
    """
    r = _check_disk_radius(radius)
    n2 = inst.q2.norm
    w = window_bound
    params = [(xt, yt) for xt in range(-w, w + 1) for yt in range(-w, w + 1)]
    zs = [(zx, zy) for zx in range(-w, w + 1) for zy in range(-w, w + 1)]
    # scaled by n2: compare (n2*z - p*n2) against (R*n2)^2 in integers
    rn_sq_num = r.numerator**2 * n2 * n2
    rn_sq_den = r.denominator**2

    def close(z, pt):
        dx = z[0] * n2 - pt[0]
        dy = z[1] * n2 - pt[1]
        return (dx * dx + dy * dy) * rn_sq_den <= rn_sq_num

    lattice = [(xt * inst.k + yt * inst.l, xt * inst.l - yt * inst.k) for xt, yt in params]
    count_by_lattice = sum(sum(1 for z in zs if close(z, pt)) for pt in lattice)
    count_by_integer = sum(sum(1 for pt in lattice if close(z, pt)) for z in zs)
    return count_by_lattice == count_by_integer


def class_multiplicity_max(q2: GaussianInt, moduli) -> int:
    """Largest number of the given moduli falling in one class mod q2."""
    buckets: dict[GaussianInt, int] = {}
    for q in moduli:
        key = div_rem(q, q2)[1]
        buckets[key] = buckets.get(key, 0) + 1
    return max(buckets.values(), default=0)
