"""Gaussian-weighted lattice sums, theta identities and congruence counts.

The counting arguments compare three computable objects:

* a one-dimensional theta identity,
      sum_u exp(-pi u^2/Q^2) e(u theta) = Q sum_g exp(-pi (g-theta)^2 Q^2),
  the Poisson-summation workhorse;
* the smoothed phase-point sum over a moduli family, in its pre-transform
  form (Gaussian bumps around every integer shift of the phase point) and its
  post-transform form (a Gaussian-weighted double sum over integer
  frequencies (alpha, beta)); the two must agree to roundoff;
* the truncated congruence count
      T_gamma(U, V) = #{|alpha| <= U, |beta| <= V :
                        alpha*x2 - beta*y2 = gamma  (mod u2)},
  bounded by (1 + 2V/d)(1 + 2U/u2') with d = gcd(x2, u2), u2' = u2/d, since
  beta is pinned mod d and alpha mod u2' once beta is chosen.

All infinite sums are truncated with certified tail bounds; the caps are
derived inside this module, not tuned per call site.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .core import GaussianInt, gcd
from .sieve import ModuliFamily
from .spacing import SpacingInstance, f_point_in_disk

__all__ = [
    "Weight",
    "EXP_LINEAR",
    "EXP_SQRT",
    "theta_identity_check",
    "CongruenceCountInstance",
    "congruence_count",
    "congruence_count_bound",
    "congruence_count_bound_ok",
    "weighted_lattice_sum",
    "gaussian_shift_sum",
    "poisson_2d_pair",
    "indicator_domination_check",
]


@dataclass(frozen=True)
class Weight:
    """A positive smooth majorant on [0, inf); positive on [1/2, 1]."""

    kind: str  # "exp-linear": exp(-pi z); "exp-sqrt": exp(-sqrt(z))

    def __call__(self, z: float) -> float:
        if z < 0:
            raise ValueError("weight defined for z >= 0")
        if self.kind == "exp-linear":
            return math.exp(-math.pi * z)
        if self.kind == "exp-sqrt":
            return math.exp(-math.sqrt(z))
        raise ValueError(f"unknown weight kind {self.kind!r}")


EXP_LINEAR = Weight("exp-linear")
EXP_SQRT = Weight("exp-sqrt")


# -- theta identity -------------------------------------------------------------


def theta_identity_check(
    q_param: float, theta: float, cutoff: int
) -> tuple[float, complex, float]:
    """Evaluate both sides of the Gaussian theta identity at the cutoff.

    Returns (lhs, rhs, |lhs - rhs|) for
        lhs = sum_{|u| <= cutoff} exp(-pi u^2/q^2) e(u theta)
        rhs = q * sum_{|g| <= cutoff} exp(-pi (g - theta)^2 q^2).
    Raises if the certified truncation tails exceed 1e-12.
    """
    if q_param < 1:
        raise ValueError("q_param must be >= 1")
    if not -0.5 <= theta <= 0.5:
        raise ValueError("theta must lie in [-1/2, 1/2]")
    if cutoff < 1:
        raise ValueError("insufficient cutoff")
    c = cutoff
    q2 = q_param * q_param
    # lhs tail: terms |u| >= c+1, ratio bounded by rho_l
    rho_l = math.exp(-math.pi * (2 * c + 3) / q2)
    tail_l = 2 * math.exp(-math.pi * (c + 1) ** 2 / q2) / (1 - rho_l)
    # rhs tail: |g| >= c+1 gives |g - theta| >= c + 1/2
    rho_r = math.exp(-math.pi * q2 * (2 * c + 2))
    tail_r = 2 * q_param * math.exp(-math.pi * q2 * (c + 0.5) ** 2) / (1 - rho_r)
    if tail_l + tail_r > 1e-12:
        raise ValueError("insufficient cutoff")

    lhs = 0j
    for u in range(-c, c + 1):
        lhs += math.exp(-math.pi * u * u / q2) * np.exp(2j * math.pi * u * theta)
    rhs = q_param * sum(
        math.exp(-math.pi * (g - theta) ** 2 * q2) for g in range(-c, c + 1)
    )
    return lhs.real if abs(lhs.imag) < 1e-15 else lhs, rhs, abs(lhs - rhs)


# -- congruence counting ---------------------------------------------------------


@dataclass(frozen=True)
class CongruenceCountInstance:
    """Parameters of the truncated congruence count T_gamma(U, V).

    Requires gcd(x2 + i*y2, u2) to be a unit in Z[i]; then d = gcd(x2, u2) is
    automatically coprime to y2, and x2' = x2/d is invertible mod u2' = u2/d.
    """

    u2: int
    x2: int
    y2: int
    gamma: int
    U: float
    V: float

    def __post_init__(self):
        if self.u2 < 1:
            raise ValueError("invalid instance: modulus must be positive")
        if self.U < 0 or self.V < 0:
            raise ValueError("invalid instance: negative box")
        if not gcd(GaussianInt(self.x2, self.y2), GaussianInt(self.u2, 0)).is_unit():
            raise ValueError("invalid instance: twist not coprime to modulus")
        if math.gcd(self.d, self.y2) != 1:
            raise AssertionError("gcd(d, y2) = 1 must follow from coprimality")

    @property
    def d(self) -> int:
        return math.gcd(self.x2, self.u2)

    @property
    def x2_prime(self) -> int:
        return self.x2 // self.d

    @property
    def u2_prime(self) -> int:
        return self.u2 // self.d


def congruence_count(inst: CongruenceCountInstance) -> int:
    """Exact count of (alpha, beta) in the box satisfying the congruence."""
    a_max = math.floor(inst.U)
    b_max = math.floor(inst.V)
    alpha = np.arange(-a_max, a_max + 1, dtype=np.int64)
    beta = np.arange(-b_max, b_max + 1, dtype=np.int64)
    vals = alpha[:, None] * inst.x2 - beta[None, :] * inst.y2 - inst.gamma
    return int(np.count_nonzero(vals % inst.u2 == 0))


def congruence_count_bound(inst: CongruenceCountInstance) -> Fraction:
    """(1 + 2V/d)(1 + 2U/u2'): beta pinned mod d, then alpha pinned mod u2'."""
    v = Fraction(inst.V)
    u = Fraction(inst.U)
    return (1 + 2 * v / inst.d) * (1 + 2 * u / inst.u2_prime)


def congruence_count_bound_ok(inst: CongruenceCountInstance) -> bool:
    return Fraction(congruence_count(inst)) <= congruence_count_bound(inst)


# -- certified truncation helpers -----------------------------------------------


def _weighted_norm_cap(weight: Weight, q_scale: float, tol: float) -> int:
    """Smallest tested cap M with sum_{norm > M} norm * weight(norm/Q) <= tol.

    The canonical-modulus count at norm n is at most n, which the bounds
    below absorb.
    """
    m = max(16, int(4 * q_scale) + 1)
    while True:
        if weight.kind == "exp-linear":
            x = math.exp(-math.pi / q_scale)
            k = m + 1
            tail = x**k * (k - (k - 1) * x) / (1 - x) ** 2
        else:
            u = math.sqrt(m / q_scale)
            tail = 2 * q_scale * q_scale * math.exp(-u) * (u**3 + 3 * u * u + 6 * u + 6)
        if tail <= tol:
            return m
        m *= 2
        if m > 10**9:
            raise ValueError("cannot certify weighted tail at this tolerance")


@lru_cache(maxsize=None)
def _family_points(kind: str, cap: int):
    """(u, v, norm) arrays of the canonical moduli with norm <= cap."""
    fam = ModuliFamily(kind, (0, cap))
    mods = fam.moduli()
    u = np.array([g.re for g in mods], dtype=np.int64)
    v = np.array([g.im for g in mods], dtype=np.int64)
    n = np.array([g.norm for g in mods], dtype=np.int64)
    return u, v, n


def _gaussian_axis_cutoff(c: float, tol: float) -> tuple[int, float, float]:
    """(A, one_axis_sum, two_sided_tail) for weights exp(-c j^2)."""
    a = 1
    while True:
        rho = math.exp(-c * (2 * a + 3))
        tail = 2 * math.exp(-c * (a + 1) ** 2) / (1 - rho)
        if tail <= tol:
            s = sum(math.exp(-c * j * j) for j in range(-a, a + 1))
            return a, s, tail
        a *= 2
        if a > 10**7:
            raise ValueError("cannot certify Gaussian tail at this tolerance")


# -- the smoothed lattice sums ----------------------------------------------------


def weighted_lattice_sum(
    inst: SpacingInstance,
    family: ModuliFamily,
    weight: Weight,
    q_scale: float,
    alpha_scale: float,
    tol: float = 1e-9,
) -> complex:
    """sum_{alpha, beta} exp(-4 pi (alpha^2+beta^2)/alpha_scale) *
    sum_{q in family kind} weight(norm(q)/q_scale) * e(phase(q; alpha, beta))

    with phase(q; a, b) = (a*(u*k+v*l) + b*(-v*k+u*l)) / norm(q2).  The
    frequency-side Gaussian scale is a free parameter: natural choices are
    N/Q for a window at Q and N/Q^2 for a window at Q^2.  Truncations on both
    sums carry certified absolute tails below ``tol``.
    """
    if q_scale <= 0 or alpha_scale <= 0:
        raise ValueError("scales must be positive")
    if family.kind == "custom":
        mods = ModuliFamily("custom", (0, float("inf")), family.custom_moduli).moduli()
        if not mods:
            return 0j
        u = np.array([g.re for g in mods], dtype=np.int64)
        v = np.array([g.im for g in mods], dtype=np.int64)
        nrm = np.array([g.norm for g in mods], dtype=np.int64)
        q_tail = 0.0
    else:
        c_ab = 4 * math.pi / alpha_scale
        a_probe, s_axis, _ = _gaussian_axis_cutoff(c_ab, tol)
        w_total_bound = (s_axis + tol) ** 2
        cap = _weighted_norm_cap(weight, q_scale, tol / (2 * max(w_total_bound, 1.0)))
        u, v, nrm = _family_points(family.kind, cap)
        q_tail = tol / 2

    n2 = inst.q2.norm
    phi = np.array([weight(float(n) / q_scale) for n in nrm])
    phi_total = float(phi.sum())
    # frequency box: remaining tail must stay under tol/2 against the q-sum
    c_ab = 4 * math.pi / alpha_scale
    a_box, _, ab_tail = _gaussian_axis_cutoff(
        c_ab, tol / (4 * max(phi_total + q_tail, 1e-30))
    )

    p1 = (u * inst.k + v * inst.l) % n2
    p2 = (-v * inst.k + u * inst.l) % n2
    table = np.exp(2j * math.pi * np.arange(n2) / n2)

    total = 0j
    for alpha in range(-a_box, a_box + 1):
        for beta in range(-a_box, a_box + 1):
            w = math.exp(-c_ab * (alpha * alpha + beta * beta))
            inner = (phi * table[(alpha * p1 + beta * p2) % n2]).sum()
            total += w * inner
    return complex(total)


def gaussian_shift_sum(
    inst: SpacingInstance,
    family: ModuliFamily,
    weight: Weight,
    q_scale: float,
    radius: float,
    tol: float = 1e-9,
) -> float:
    """sum_q weight(norm(q)/q_scale) * sum_{x,y in Z}
    exp(-pi ((P1-x)^2 + (P2-y)^2)/R^2), the pre-transform smoothed count,

    where (P1, P2) = ((u*k+v*l)/norm(q2), (-v*k+u*l)/norm(q2)).  The (x, y)
    sum factors into two one-dimensional Gaussian sums around the nearest
    integers; both it and the q-sum are truncated with certified tails.
    """
    if q_scale <= 0 or radius <= 0:
        raise ValueError("scales must be positive")
    r2 = radius * radius
    c = math.pi / r2
    # one-axis Gaussian sum bound, any center: 1 + 2 sum_{j>=1} exp(-c (j-1/2)^2)
    g_max = 1.0
    j = 1
    while True:
        term = 2 * math.exp(-c * (j - 0.5) ** 2)
        g_max += term
        if term < 1e-18:
            break
        j += 1

    if family.kind == "custom":
        mods = family.moduli()
    else:
        cap = _weighted_norm_cap(weight, q_scale, tol / (2 * g_max * g_max))
        mods = ModuliFamily(family.kind, (0, cap)).moduli()

    # per-axis shift cutoff: distance of dropped terms >= D + 1/2
    d_cut = 1
    while True:
        rho = math.exp(-c * (2 * d_cut + 2))
        tail = 2 * math.exp(-c * (d_cut + 0.5) ** 2) / (1 - rho)
        if tail * 4 * g_max * max(len(mods), 1) <= tol / 2:
            break
        d_cut += 1

    n2 = inst.q2.norm
    total = 0.0
    for q in mods:
        p1 = (q.re * inst.k + q.im * inst.l) / n2
        p2 = (-q.im * inst.k + q.re * inst.l) / n2
        gx = sum(
            math.exp(-c * (p1 - x) ** 2)
            for x in range(round(p1) - d_cut, round(p1) + d_cut + 1)
        )
        gy = sum(
            math.exp(-c * (p2 - y) ** 2)
            for y in range(round(p2) - d_cut, round(p2) + d_cut + 1)
        )
        total += weight(q.norm / q_scale) * gx * gy
    return total


def poisson_2d_pair(
    inst: SpacingInstance,
    family: ModuliFamily,
    weight: Weight,
    q_scale: float,
    radius: float,
    rel_tol: float = 1e-8,
) -> tuple[float, float]:
    """The pre- and post-transform values of the smoothed count; equal up to
    truncation tails, since the (x, y) sum Poisson-transforms into
    R^2 sum_{alpha,beta} exp(-pi (alpha^2+beta^2) R^2) e(alpha P1 + beta P2).

    The truncation tolerance adapts to the value: a first pass estimates the
    magnitude, a second pass certifies absolute tails below rel_tol times it.
    """
    probe = gaussian_shift_sum(inst, family, weight, q_scale, radius, 1e-9)
    tol = max(probe * rel_tol, 1e-280)
    lhs = gaussian_shift_sum(inst, family, weight, q_scale, radius, tol)
    rhs = radius * radius * weighted_lattice_sum(
        inst, family, weight, q_scale, 4.0 / (radius * radius), tol
    )
    if abs(rhs.imag) > max(tol, 1e-12 * abs(rhs)):
        raise AssertionError("post-transform sum should be real")
    return lhs, rhs.real


def indicator_domination_check(
    inst: SpacingInstance,
    family: ModuliFamily,
    q_scale: float,
    radius: Fraction,
) -> tuple[int, float, bool]:
    """Window count of phase points in the closed disk against its majorant.

    Every counted modulus q (window q_scale/2 < norm <= q_scale, phase point
    inside the closed R-disk) contributes at least exp(-pi) * exp(-pi) to the
    smoothed sum: the weight exp(-pi norm/Q) is >= exp(-pi) on the window and
    the nearest-integer Gaussian term is >= exp(-pi R^2/R^2).  Hence
        count <= exp(2 pi) * gaussian_shift_sum(...).
    Returns (count, majorant value, inequality holds).
    """
    radius = Fraction(radius)
    window_family = ModuliFamily(family.kind, (q_scale / 2, q_scale), family.custom_moduli)
    count = 0
    for q in window_family.moduli():
        if f_point_in_disk(inst, (q.re, q.im), radius):
            count += 1
    rhs = gaussian_shift_sum(inst, family, EXP_LINEAR, q_scale, float(radius))
    bound = math.exp(2 * math.pi) * rhs
    return count, bound, count <= bound * (1 + 1e-9)
