"""One-dimensional grid problems over Z[√2].

Find every α = a + b√2 with α ∈ [x0, x1] and α• ∈ [y0, y1]. Bounds are exact
reals (ints, Fractions, floats, mpf, ring values); all arithmetic is exact.
"""

from __future__ import annotations

import math
from functools import cmp_to_key

import mpmath

from .rings import LAMBDA, LAMBDA_INV, QRoot2, ZRoot2, lambda_power

_LOG_LAMBDA = math.log(1 + math.sqrt(2))
_HALF_SQRT2 = QRoot2(0, 1, 2)  # 1/√2
_INV_SQRT8 = QRoot2(0, 1, 4)  # 1/√8


def _log_abs(x: QRoot2) -> float:
    return float(mpmath.log(abs(x.to_mpf(32))))


def _scale(x: QRoot2, s: ZRoot2) -> QRoot2:
    return QRoot2(x.a * s.a + 2 * x.b * s.b, x.a * s.b + x.b * s.a, x.den)


def _solve_normalised(x0: QRoot2, x1: QRoot2, y0: QRoot2, y1: QRoot2) -> list[ZRoot2]:
    """Scan b; assumes the width of [x0, x1] is below 1 so each b has ≤ 1 a."""
    out = []
    blo = ((x0 - y1) * _INV_SQRT8).ceil()
    bhi = ((x1 - y0) * _INV_SQRT8).floor()
    for b in range(blo, bhi + 1):
        shift = QRoot2(0, b)
        alo = max((x0 - shift).ceil(), (y0 + shift).ceil())
        ahi = min((x1 - shift).floor(), (y1 + shift).floor())
        for a in range(alo, ahi + 1):
            out.append(ZRoot2(a, b))
    return out


def _cmp_value(p: ZRoot2, q: ZRoot2) -> int:
    return (p - q).sign()


def enumerate_grid_1d(A, B) -> list[ZRoot2]:
    """All α ∈ Z[√2] with α ∈ A and α• ∈ B, sorted ascending.

    Args:
        A: pair (x0, x1) of exact reals.
        B: pair (y0, y1) of exact reals.
    """
    x0, x1 = (QRoot2.coerce(v) for v in A)
    y0, y1 = (QRoot2.coerce(v) for v in B)
    if x1 < x0 or y1 < y0:
        return []
    dx, dy = x1 - x0, y1 - y0
    if dx.sign() == 0:
        if dy.sign() == 0:
            return _point_problem(x0, y0)
        # α ↦ α• swaps the roles of A and B
        sols = enumerate_grid_1d((y0, y1), (x0, x1))
        return sorted((s.bullet() for s in sols), key=cmp_to_key(_cmp_value))

    # rescale so that λ⁻¹ ≤ width(A) < 1
    n = -math.floor(_log_abs(dx) / _LOG_LAMBDA)
    scale = lambda_power(n)
    sx = _scale(dx, scale)
    while not sx < 1:
        n -= 1
        sx = _scale(dx, lambda_power(n))
    while sx < _scale(QRoot2(1), LAMBDA_INV):
        n += 1
        sx = _scale(dx, lambda_power(n))
    fwd = lambda_power(n)
    fwd_b = fwd.bullet()
    xa, xb = _scale(x0, fwd), _scale(x1, fwd)
    ya, yb = _scale(y0, fwd_b), _scale(y1, fwd_b)
    if yb < ya:
        ya, yb = yb, ya
    sols = _solve_normalised(xa, xb, ya, yb)
    back = lambda_power(-n)
    sols = [s * back for s in sols]
    return sorted(sols, key=cmp_to_key(_cmp_value))


def _point_problem(x: QRoot2, y: QRoot2) -> list[ZRoot2]:
    # α = x, α• = y forces a = (x+y)/2, b√2 = (x-y)/2
    s = x + y
    t = (x - y) * _HALF_SQRT2 * QRoot2(1, 0, 2)
    if s.b or t.b or s.a % (2 * s.den) or t.a % t.den:
        return []
    return [ZRoot2(s.a // (2 * s.den), t.a // t.den)]


def count_bound_applies(A, B) -> tuple[bool, bool]:
    """(δΔ < 1, δΔ ≥ λ²) for the interval widths δ, Δ."""
    dx = QRoot2.coerce(A[1]) - QRoot2.coerce(A[0])
    dy = QRoot2.coerce(B[1]) - QRoot2.coerce(B[0])
    prod = dx * dy
    return prod < 1, not prod < QRoot2(3, 2)


__all__ = ["enumerate_grid_1d", "count_bound_applies", "LAMBDA"]
