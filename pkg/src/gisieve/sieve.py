"""Large-sieve sums over Z[i].

The central object is

    lhs(family, a) = sum over moduli q in the family window,
                     sum over reduced residues r mod q,
                     |sum over norm(n) <= N of a_n e(Re(n r conj(q))/norm(q))|^2,

together with the benchmark envelopes it is compared against:

    bound_t1 = (Q^2 + N) Z                      (all Gaussian moduli)
    bound_t2 = (Q^3 + Q^2 sqrt(N) + N) Z        (natural-integer moduli)
    bound_t3 = (QN)^eps (Q^3 + Q^2 sqrt(N) + sqrt(Q) N) Z   (square-norm moduli)

with Z the coefficient energy.  Ratios lhs/bound are reported, never asserted
against a specific implied constant.

Two evaluators are provided.  ``sieve_lhs`` is the reference: a direct loop
over (q, r, n) with exact integer phase numerators.  ``sieve_lhs_fast``
aggregates the coefficients onto the norm(q) x norm(q) grid (the phase only
depends on n mod norm(q) coordinatewise) and evaluates all residues of one
modulus with a single 2-D FFT, reading off reduced residues through the
frequency map w = r*conj(q) mod norm(q).  Both sum in sorted (q, r) order so
results are reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .characters import _phase_table, character_table
from .core import GaussianInt, ONE, ZERO, div_rem, gcd, residue_system, totient
from .rng import Lcg64

__all__ = [
    "ALL",
    "NATURAL",
    "SQUARE_NORM",
    "CUSTOM",
    "FAMILY_KINDS",
    "ModuliFamily",
    "CoefficientSequence",
    "disk_points",
    "inner_sum",
    "sieve_lhs",
    "sieve_lhs_fast",
    "bound_t1",
    "bound_t2",
    "bound_t3",
    "bound_t4",
    "multiplicative_lhs",
    "MULTIPLICATIVE_NORM_CAP",
]

ALL = "all"
NATURAL = "natural"
SQUARE_NORM = "square-norm"
CUSTOM = "custom"
FAMILY_KINDS = (ALL, NATURAL, SQUARE_NORM, CUSTOM)

ENUMERATION_NORM_CAP = 10**8
MULTIPLICATIVE_NORM_CAP = 2000


def _kind_keeps(kind: str, g: GaussianInt) -> bool:
    if kind == ALL:
        return True
    if kind == NATURAL:
        return g.im == 0
    if kind == SQUARE_NORM:
        return g.is_square_norm()
    raise ValueError(f"unknown family kind {kind!r}")


@lru_cache(maxsize=None)
def _enumerate_window(kind: str, low2: int, high: int) -> tuple[GaussianInt, ...]:
    """Canonical moduli of the kind with low2/2 < 2*norm <= 2*high.

    ``low2`` is twice the exclusive lower norm bound so half-integer window
    edges stay exact.
    """
    if high > ENUMERATION_NORM_CAP:
        raise ValueError("norm cap exceeded")
    out = []
    if kind == NATURAL:
        u = 1
        while u * u <= high:
            if 2 * u * u > low2:
                out.append(GaussianInt(u, 0))
            u += 1
    else:
        u = 1
        while u * u <= high:
            vmax = math.isqrt(high - u * u)
            for v in range(vmax + 1):
                n = u * u + v * v
                if 2 * n > low2:
                    g = GaussianInt(u, v)
                    if _kind_keeps(kind, g):
                        out.append(g)
            u += 1
    return tuple(sorted(out, key=lambda g: (g.norm, g.re, g.im)))


@dataclass(frozen=True)
class ModuliFamily:
    """A selector for a set of moduli restricted to a norm window.

    ``window`` is (low_exclusive, high_inclusive) on norms; enumerated moduli
    are nonzero canonical associates.  ``custom_moduli`` backs the "custom"
    kind (entries are canonicalized, deduplicated and window-filtered).
    """

    kind: str
    window: tuple[float, float]
    custom_moduli: tuple[GaussianInt, ...] = ()
    name: str = ""

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}")

    def moduli(self) -> list[GaussianInt]:
        low, high = self.window
        if high < 1 or high < low:
            return []
        if self.kind == CUSTOM:
            kept = {
                g.canonical()
                for g in self.custom_moduli
                if not g.is_zero() and low < g.norm <= high
            }
            return sorted(kept, key=lambda g: (g.norm, g.re, g.im))
        low2 = int(math.floor(2 * low))  # norm > low  <=>  2*norm > floor(2*low)
        return list(_enumerate_window(self.kind, low2, int(math.floor(high))))


def disk_points(radius_sq: int) -> list[GaussianInt]:
    """All lattice points with norm <= radius_sq, sorted lexicographically."""
    s_max = math.isqrt(radius_sq)
    out = []
    for s in range(-s_max, s_max + 1):
        t_max = math.isqrt(radius_sq - s * s)
        for t in range(-t_max, t_max + 1):
            out.append(GaussianInt(s, t))
    return sorted(out)


class CoefficientSequence:
    """Complex coefficients supported on the lattice disk norm(n) <= N.

    ``entries`` maps every disk point to its coefficient (zeros included, so
    the support is exactly the disk); ``energy`` is sum |a_n|^2.
    """

    __slots__ = ("radius_sq", "entries", "energy", "_arrays")

    def __init__(self, radius_sq: int, entries: dict[GaussianInt, complex]):
        if radius_sq < 0:
            raise ValueError("invalid spec: negative radius")
        for n in entries:
            if n.norm > radius_sq:
                raise ValueError(f"support point {n} outside disk of norm {radius_sq}")
        full = {n: complex(entries.get(n, 0)) for n in disk_points(radius_sq)}
        self.radius_sq = radius_sq
        self.entries = full
        self.energy = float(sum(abs(a) ** 2 for a in full.values()))
        self._arrays = None

    def items_sorted(self) -> list[tuple[int, int, complex]]:
        return [(n.re, n.im, a) for n, a in self.entries.items()]

    def support_arrays(self):
        """(s, t, a) numpy views of the disk in sorted order."""
        if self._arrays is None:
            pts = self.items_sorted()
            s = np.array([p[0] for p in pts], dtype=np.int64)
            t = np.array([p[1] for p in pts], dtype=np.int64)
            a = np.array([p[2] for p in pts], dtype=np.complex128)
            self._arrays = (s, t, a)
        return self._arrays

    # -- generators ---------------------------------------------------------

    @classmethod
    def all_ones(cls, radius_sq: int) -> "CoefficientSequence":
        return cls(radius_sq, {n: 1.0 for n in disk_points(radius_sq)})

    @classmethod
    def delta(cls, n0: GaussianInt, radius_sq: int) -> "CoefficientSequence":
        if n0.norm > radius_sq:
            raise ValueError("invalid spec: delta point outside disk")
        return cls(radius_sq, {n0: 1.0})

    @classmethod
    def random_phases(cls, radius_sq: int, seed: int) -> "CoefficientSequence":
        """Unit-modulus coefficients with LCG phases, in sorted point order."""
        rng = Lcg64(seed)
        entries = {}
        for n in disk_points(radius_sq):
            theta = rng.next_unit()
            entries[n] = complex(math.cos(2 * math.pi * theta), math.sin(2 * math.pi * theta))
        return cls(radius_sq, entries)

    @classmethod
    def progression_adversary(cls, q0: GaussianInt, radius_sq: int) -> "CoefficientSequence":
        """a_n = 1 exactly on the multiples of q0 inside the disk."""
        if q0.is_zero():
            raise ValueError("invalid spec: zero progression modulus")
        return cls(
            radius_sq,
            {n: 1.0 for n in disk_points(radius_sq) if q0.divides(n)},
        )

    @classmethod
    def from_spec(
        cls,
        spec: str,
        radius_sq: int,
        seed: int = 0,
        delta_point: GaussianInt = ZERO,
        adversary_modulus: GaussianInt = GaussianInt(1, 1),
    ) -> "CoefficientSequence":
        if spec == "all-ones":
            return cls.all_ones(radius_sq)
        if spec == "delta":
            return cls.delta(delta_point, radius_sq)
        if spec == "random":
            return cls.random_phases(radius_sq, seed)
        if spec == "adversary":
            return cls.progression_adversary(adversary_modulus, radius_sq)
        raise ValueError(f"invalid spec {spec!r}")


# -- left-hand sides ----------------------------------------------------------


def inner_sum(q: GaussianInt, r: GaussianInt, coeffs: CoefficientSequence) -> complex:
    """sum over the disk of a_n e(Re(n*r*conj(q))/norm(q)).

    For n = s + ti and r*conj(q) = w1 + w2*i the phase numerator is
    s*w1 - t*w2, an exact integer reduced mod norm(q) before table lookup.
    """
    if q.is_zero():
        raise ValueError("zero modulus")
    nq = q.norm
    w = r * q.conj()
    w1, w2 = w.re, w.im
    tbl = _phase_table(nq)
    acc = 0j
    for s, t, a in coeffs.items_sorted():
        if a:
            acc += a * tbl[(s * w1 - t * w2) % nq]
    return acc


def sieve_lhs(family: ModuliFamily, coeffs: CoefficientSequence) -> float:
    """Reference evaluator: direct loops in sorted (q, r) order."""
    acc = 0.0
    for q in family.moduli():
        for r in residue_system(q).reduced:
            acc += abs(inner_sum(q, r, coeffs)) ** 2
    return acc


def sieve_lhs_fast(family: ModuliFamily, coeffs: CoefficientSequence) -> float:
    """FFT evaluator, equal to ``sieve_lhs`` up to ~1e-12 relative roundoff.

    Per modulus q the coefficients are aggregated on the norm(q) x norm(q)
    coordinate grid; one forward FFT then holds every residue's inner sum at
    bin ((-w1) mod nq, w2 mod nq) for w = r*conj(q).
    """
    s_arr, t_arr, a_arr = coeffs.support_arrays()
    total = 0.0
    for q in family.moduli():
        nq = q.norm
        grid = np.zeros((nq, nq), dtype=np.complex128)
        np.add.at(grid, (s_arr % nq, t_arr % nq), a_arr)
        spectrum = np.fft.fft2(grid)
        qc = q.conj()
        part = 0.0
        for r in residue_system(q).reduced:
            w = r * qc
            val = spectrum[(-w.re) % nq, w.im % nq]
            part += float(val.real) * float(val.real) + float(val.imag) * float(val.imag)
        total += part
    return total


# -- benchmark bounds -----------------------------------------------------------


def _check_bound_args(Q, N, Z, eps=0.0):
    if Q < 1 or N < 1:
        raise ValueError("Q and N must be >= 1")
    if Z < 0:
        raise ValueError("Z must be >= 0")
    if eps < 0:
        raise ValueError("epsilon must be >= 0")


def bound_t1(Q: float, N: float, Z: float) -> float:
    _check_bound_args(Q, N, Z)
    return (Q * Q + N) * Z


def bound_t2(Q: float, N: float, Z: float) -> float:
    _check_bound_args(Q, N, Z)
    return (Q**3 + Q * Q * math.sqrt(N) + N) * Z


def bound_t3(Q: float, N: float, Z: float, eps: float = 0.1) -> float:
    _check_bound_args(Q, N, Z, eps)
    return (Q * N) ** eps * (Q**3 + Q * Q * math.sqrt(N) + math.sqrt(Q) * N) * Z


def bound_t4(Q: float, N: float, Z: float, eps: float = 0.1) -> float:
    """Same envelope as bound_t3; benchmarks the multiplicative-character sum."""
    return bound_t3(Q, N, Z, eps)


# -- multiplicative-character analogue ------------------------------------------


def multiplicative_lhs(
    window: tuple[float, float],
    coeffs: CoefficientSequence,
    include_unit: bool = True,
) -> float:
    """Square-norm moduli sum weighted by norm/totient over proper characters.

    For each square-norm modulus q in the window this adds

        (norm(q)/totient(q)) * sum over proper chi of |sum_n a_n chi(n)|^2

    where chi(n) = 0 when gcd(n, q) is not a unit and chi(0) = 0.  The unit
    modulus (norm 1) belongs to the square-norm family; ``include_unit=False``
    drops it.
    """
    fam = ModuliFamily(SQUARE_NORM, window)
    moduli = fam.moduli()
    for q in moduli:
        if q.norm > MULTIPLICATIVE_NORM_CAP:
            raise ValueError("norm cap exceeded for character tables")
    pts = [(n, a) for n, a in coeffs.entries.items()]
    total = 0.0
    for q in moduli:
        if not include_unit and q.is_unit():
            continue
        weight = q.norm / totient(q)
        part = 0.0
        for chi in character_table(q):
            if not chi.proper:
                continue
            val = sum(a * chi(n) for n, a in pts if a)
            part += abs(val) ** 2
        total += weight * part
    return total
