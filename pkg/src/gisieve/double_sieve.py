"""The Bombieri-Iwaniec double large sieve inequality in dimensions 1 and 2.

For finite point sets X, Y in R^K with coefficients a(x), b(y) and positive
box sizes X_k, Y_k, the bilinear form

    B(a, b) = sum_{x in X, |x_k| < X_k} sum_{y in Y, |y_k| < Y_k}
              a(x) b(y) e(x . y)

satisfies  |B(a, b)|^2 <= (2 pi^2)^K prod_k (1 + X_k Y_k) B(b; X) B(a; Y),
where B(b; X) sums |b(y) b(y')| over ordered pairs with |y_k - y'_k|
< (2 X_k)^{-1} in every coordinate (and symmetrically for B(a; Y)).  All box
and proximity comparisons are strict.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

__all__ = ["BilinearInstance", "bilinear_form", "proximity_form", "check_dls"]

Point = tuple[float, ...]


@dataclass(frozen=True)
class BilinearInstance:
    dimension: int
    points_x: tuple[tuple[Point, complex], ...]
    points_y: tuple[tuple[Point, complex], ...]
    box_x: tuple[float, ...]
    box_y: tuple[float, ...]

    def __post_init__(self):
        if self.dimension not in (1, 2):
            raise ValueError("dimension must be 1 or 2")
        for box in (self.box_x, self.box_y):
            if len(box) != self.dimension or any(s <= 0 for s in box):
                raise ValueError("box sizes must be positive, one per coordinate")
        for pts in (self.points_x, self.points_y):
            for p, _ in pts:
                if len(p) != self.dimension:
                    raise ValueError("point dimension mismatch")


def bilinear_form(inst: BilinearInstance) -> complex:
    """The double sum with strict box constraints on both sides."""
    xs = [
        (p, a)
        for p, a in inst.points_x
        if all(abs(c) < s for c, s in zip(p, inst.box_x))
    ]
    ys = [
        (p, b)
        for p, b in inst.points_y
        if all(abs(c) < s for c, s in zip(p, inst.box_y))
    ]
    acc = 0j
    for px, a in xs:
        for py, b in ys:
            dot = sum(cx * cy for cx, cy in zip(px, py))
            acc += a * b * cmath.exp(2j * math.pi * dot)
    return acc


def proximity_form(points, coeffs, opposite_box) -> float:
    """sum over ordered pairs with |p_k - p'_k| < 1/(2*S_k) of |c c'|."""
    thresholds = [1.0 / (2.0 * s) for s in opposite_box]
    acc = 0.0
    n = len(points)
    for i in range(n):
        for j in range(n):
            if all(
                abs(points[i][k] - points[j][k]) < thresholds[k]
                for k in range(len(thresholds))
            ):
                acc += abs(coeffs[i]) * abs(coeffs[j])
    return acc


def check_dls(inst: BilinearInstance) -> tuple[float, float, bool]:
    """(|B(a,b)|^2, right-hand side, inequality holds)."""
    lhs_sq = abs(bilinear_form(inst)) ** 2
    ys = [p for p, _ in inst.points_y]
    bs = [c for _, c in inst.points_y]
    xs = [p for p, _ in inst.points_x]
    as_ = [c for _, c in inst.points_x]
    prox_y = proximity_form(ys, bs, inst.box_x)
    prox_x = proximity_form(xs, as_, inst.box_y)
    k = inst.dimension
    rhs = (2 * math.pi**2) ** k
    for xk, yk in zip(inst.box_x, inst.box_y):
        rhs *= 1 + xk * yk
    rhs *= prox_y * prox_x
    return lhs_sq, rhs, lhs_sq <= rhs * (1 + 1e-9)
