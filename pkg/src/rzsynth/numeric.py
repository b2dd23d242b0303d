"""Certified real arithmetic.

Exact values live in Q(√2) (see :class:`rzsynth.rings.QRoot2`); they are
enclosed by dyadic intervals obtained from exact integer floors, so the
intervals at precision ``p + 64`` are always nested inside those at ``p``.
Transcendental quantities (cos, sin, π) come from mpmath's interval context.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import iv
from mpmath.libmp import from_man_exp

from .rings import DOmega, DRoot2, QRoot2, ZOmega, ZRoot2

LESS, EQUAL, GREATER = -1, 0, 1


def working_precision(eps) -> int:
    """Default bit precision for a target accuracy ε."""
    e = Fraction(eps) if not isinstance(eps, Fraction) else eps
    if e <= 0:
        raise ValueError("ε must be positive")
    log2inv = math.log2(e.denominator) - math.log2(e.numerator)
    return max(64, math.ceil(2 * log2inv) + 32)


def _dyadic(man: int, exp: int) -> mpmath.mpf:
    return mpmath.mp.make_mpf(from_man_exp(man, exp))


@dataclass(frozen=True)
class RealInterval:
    """Closed interval [lo, hi] with mpf (dyadic) endpoints."""

    lo: mpmath.mpf
    hi: mpmath.mpf

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @staticmethod
    def point(x) -> RealInterval:
        x = mpmath.mpf(x)
        return RealInterval(x, x)

    @staticmethod
    def from_iv(x) -> RealInterval:
        a, b = x._mpi_
        return RealInterval(mpmath.mp.make_mpf(a), mpmath.mp.make_mpf(b))

    def to_iv(self):
        return iv.mpf((self.lo, self.hi))

    def width(self) -> mpmath.mpf:
        return self.hi - self.lo

    def mid(self) -> mpmath.mpf:
        return mpmath.ldexp(mpmath.fadd(self.lo, self.hi, exact=True), -1)

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def __contains__(self, x) -> bool:
        return self.contains(x)

    def subset_of(self, other: RealInterval) -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def __add__(self, other) -> RealInterval:
        o = _as_interval(other)
        return RealInterval(mpmath.fadd(self.lo, o.lo, exact=True), mpmath.fadd(self.hi, o.hi, exact=True))

    __radd__ = __add__

    def __neg__(self) -> RealInterval:
        # plain unary minus would round to the context precision
        return RealInterval(mpmath.fneg(self.hi, exact=True), mpmath.fneg(self.lo, exact=True))

    def __sub__(self, other) -> RealInterval:
        return self + (-_as_interval(other))

    def __rsub__(self, other) -> RealInterval:
        return _as_interval(other) - self

    def __mul__(self, other) -> RealInterval:
        o = _as_interval(other)
        ps = [mpmath.fmul(x, y, exact=True) for x in (self.lo, self.hi) for y in (o.lo, o.hi)]
        return RealInterval(min(ps), max(ps))

    __rmul__ = __mul__

    def round_outward(self, prec: int) -> RealInterval:
        return RealInterval(
            mpmath.fadd(self.lo, 0, prec=prec, rounding="f"),
            mpmath.fadd(self.hi, 0, prec=prec, rounding="c"),
        )

    def sqrt(self, prec: int) -> RealInterval:
        lo = max(self.lo, mpmath.mpf(0))
        return RealInterval(mpmath.sqrt(lo, prec=prec, rounding="f"), mpmath.sqrt(self.hi, prec=prec, rounding="c"))

    def compare(self, other) -> int | None:
        """Certified ordering if the intervals are separated, else None."""
        o = _as_interval(other)
        if self.hi < o.lo:
            return LESS
        if self.lo > o.hi:
            return GREATER
        return None


def _as_interval(x) -> RealInterval:
    if isinstance(x, RealInterval):
        return x
    if isinstance(x, (int, mpmath.mpf)):
        return RealInterval.point(x)
    raise TypeError(f"cannot use {type(x).__name__} as an interval without a precision")


def _to_qroot2(x) -> QRoot2:
    if isinstance(x, DOmega):
        if not x.is_real():
            raise ValueError("complex value has no real enclosure; use real_part/imag_part")
        x = x.to_droot2()
    if isinstance(x, ZOmega):
        x = x.to_zroot2()
    return QRoot2.coerce(x)


def eval_ring_element(x, prec: int) -> RealInterval:
    """Dyadic enclosure of an exact real x of width ≤ 2^(-prec)."""
    q = _to_qroot2(x)
    f = q.scaled_floor(prec)
    lo = _dyadic(f, -prec)
    if q.b == 0 and prec >= 0 and (q.a << prec) % q.den == 0:
        return RealInterval(lo, lo)
    return RealInterval(lo, _dyadic(f + 1, -prec))


def certified_compare(x, y) -> int:
    """Exact ordering of two elements of Q(√2) (ints, Fractions, floats, mpf, ring values)."""
    qx, qy = _to_qroot2(x), _to_qroot2(y)
    if qx == qy:
        return EQUAL
    prec = 64
    while True:
        c = eval_ring_element(qx, prec).compare(eval_ring_element(qy, prec))
        if c is not None:
            return c
        prec *= 2


def compare_with_interval(x, target_fn, prec: int, doublings: int = 3) -> int | None:
    """Order an exact x against a transcendental quantity.

    ``target_fn(p)`` must return a RealInterval enclosure at precision p.
    Returns None if still ambiguous after ``doublings`` precision doublings.
    """
    p = prec
    for _ in range(doublings + 1):
        c = eval_ring_element(x, p + 8).compare(target_fn(p))
        if c is not None:
            return c
        p *= 2
    return None


# ---------------------------------------------------------------------------
# interval helpers for transcendental inputs


def iv_eval(fn, prec: int) -> RealInterval:
    """Evaluate ``fn()`` in mpmath's interval context at ``prec`` bits."""
    old = iv.prec
    iv.prec = prec
    try:
        return RealInterval.from_iv(fn())
    finally:
        iv.prec = old


def fraction_interval(q: Fraction, prec: int) -> RealInterval:
    """Dyadic enclosure of a rational."""
    return eval_ring_element(QRoot2(q.numerator, 0, q.denominator), prec)
