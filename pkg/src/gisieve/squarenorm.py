"""Square-norm moduli: ground-truth enumeration vs. triple parametrization.

A modulus q = u + vi has square norm exactly when (u, v, sqrt(norm)) is a
Pythagorean triple.  ``enumerate_square_norm`` scans norms directly and is the
ground truth used by the sieve experiments.  ``enumerate_pyth_param`` builds
the candidates (m^2 - n^2) + (2mn)i over integer (m, n) and canonicalizes;
``coverage_diff`` reports how the two sets differ.  The parametrized set is an
audit object only: the diff is reported verbatim, not repaired.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import GaussianInt

__all__ = [
    "PythParam",
    "enumerate_square_norm",
    "enumerate_pyth_param",
    "coverage_diff",
    "SQUARE_NORM_ENUM_CAP",
]

SQUARE_NORM_ENUM_CAP = 10**8


@dataclass(frozen=True)
class PythParam:
    """One parameter pair (m, n) and its triple (m^2-n^2, 2mn, m^2+n^2)."""

    m: int
    n: int

    @property
    def triple(self) -> tuple[int, int, int]:
        m, n = self.m, self.n
        return (m * m - n * n, 2 * m * n, m * m + n * n)

    def modulus(self) -> GaussianInt:
        a, b, _ = self.triple
        return GaussianInt(a, b)


def _check_cap(max_norm: int):
    if max_norm > SQUARE_NORM_ENUM_CAP:
        raise ValueError("cap exceeded")


def enumerate_square_norm(max_norm: int) -> list[GaussianInt]:
    """All canonical q != 0 with norm(q) <= max_norm a perfect square."""
    _check_cap(max_norm)
    out = []
    u = 1
    while u * u <= max_norm:
        v = np.arange(0, math.isqrt(max_norm - u * u) + 1, dtype=np.int64)
        norms = u * u + v * v
        roots = np.sqrt(norms.astype(np.float64)).round().astype(np.int64)
        mask = roots * roots == norms
        out.extend(GaussianInt(u, int(vv)) for vv in v[mask])
        u += 1
    return sorted(out, key=lambda g: (g.norm, g.re, g.im))


def enumerate_pyth_param(max_norm: int) -> list[GaussianInt]:
    """Canonical associates of (m^2-n^2) + (2mn)i with (m^2+n^2)^2 <= max_norm."""
    _check_cap(max_norm)
    s = math.isqrt(max_norm)  # need m^2 + n^2 <= s
    m_max = math.isqrt(s)
    found = set()
    for m in range(-m_max, m_max + 1):
        for n in range(-m_max, m_max + 1):
            if m * m + n * n > s:
                continue
            g = GaussianInt(m * m - n * n, 2 * m * n)
            if g.is_zero():
                continue
            found.add(g.canonical())
    return sorted(found, key=lambda g: (g.norm, g.re, g.im))


def coverage_diff(max_norm: int) -> tuple[list[GaussianInt], list[GaussianInt]]:
    """(missing, extraneous) between ground truth and the parametrized set."""
    truth = set(enumerate_square_norm(max_norm))
    param = set(enumerate_pyth_param(max_norm))
    key = lambda g: (g.norm, g.re, g.im)
    return sorted(truth - param, key=key), sorted(param - truth, key=key)
