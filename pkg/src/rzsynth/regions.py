"""Convex regions used by the synthesiser: disks and ε-regions.

Membership of a point of D[ω] is decided exactly where the boundary is
algebraic (disks) and by certified interval arithmetic otherwise (the
half-plane bounding an ε-region).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

import mpmath
from mpmath import iv

from .grid2d import ConvexRegion, Ellipse
from .numeric import RealInterval, eval_ring_element, fraction_interval, iv_eval, working_precision
from .rings import DOmega, DRoot2, ZRoot2

# relative inflation of enclosing ellipses, absorbs rounding in later stages
_INFLATE = mpmath.mpf(2) ** -40


@dataclass(frozen=True)
class Angle:
    """θ = pi_multiple·π (exact) or θ = value (exact decimal/rational)."""

    pi_multiple: Optional[Fraction] = None
    value: Optional[Fraction] = None

    def __post_init__(self):
        if (self.pi_multiple is None) == (self.value is None):
            raise ValueError("exactly one of pi_multiple, value must be set")

    @staticmethod
    def parse(text: Union[str, int, float, Fraction, "Angle"]) -> Angle:
        if isinstance(text, Angle):
            return text
        if isinstance(text, (int, Fraction)):
            return Angle(value=Fraction(text))
        if isinstance(text, float):
            return Angle(value=Fraction(text))
        s = text.strip().replace(" ", "").lower()
        m = re.fullmatch(r"([+-]?\d*)\*?(?:pi|π)(?:/(\d+))?", s)
        if m:
            num = m.group(1)
            p = int(num) if num not in ("", "+", "-") else (-1 if num == "-" else 1)
            q = int(m.group(2)) if m.group(2) else 1
            if q == 0:
                raise ValueError(f"zero denominator in angle {text!r}")
            return Angle(pi_multiple=Fraction(p, q))
        m = re.fullmatch(r"([+-]?\d+)/(\d+)\*?(?:pi|π)", s)
        if m:
            return Angle(pi_multiple=Fraction(int(m.group(1)), int(m.group(2))))
        try:
            return Angle(value=Fraction(s))
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"cannot parse angle {text!r}") from None

    def render(self) -> str:
        if self.pi_multiple is not None:
            f = self.pi_multiple
            if f == 0:
                return "0"
            head = {1: "pi", -1: "-pi"}.get(f.numerator, f"{f.numerator}*pi")
            return head if f.denominator == 1 else f"{head}/{f.denominator}"
        v = self.value
        return str(v.numerator) if v.denominator == 1 else render_decimal(v)

    def __str__(self) -> str:
        return self.render()

    def _iv(self):
        if self.pi_multiple is not None:
            f = self.pi_multiple
            return iv.pi * f.numerator / f.denominator
        return iv.mpf(self.value.numerator) / self.value.denominator

    def to_mpf(self, prec: int = 53) -> mpmath.mpf:
        with mpmath.workprec(prec + 10):
            if self.pi_multiple is not None:
                return mpmath.pi * self.pi_multiple.numerator / self.pi_multiple.denominator
            return mpmath.mpf(self.value.numerator) / self.value.denominator

    def half_cos_sin(self, prec: int) -> tuple[RealInterval, RealInterval]:
        """Enclosures of cos(θ/2) and sin(θ/2)."""
        return _half_cos_sin(self, prec)


@lru_cache(maxsize=256)
def _half_cos_sin(angle: Angle, prec: int) -> tuple[RealInterval, RealInterval]:
    c = iv_eval(lambda: iv.cos(angle._iv() / 2), prec)
    s = iv_eval(lambda: iv.sin(angle._iv() / 2), prec)
    return c, s


def render_decimal(v: Fraction) -> str:
    d = v.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{v.numerator}/{v.denominator}"
    digits = max(twos, fives)
    scaled = v * 10**digits
    sign = "-" if scaled < 0 else ""
    s = str(abs(scaled.numerator)).rjust(digits + 1, "0")
    return f"{sign}{s[:-digits]}.{s[-digits:]}"


def parse_epsilon(text: Union[str, float, Fraction, int]) -> Fraction:
    if isinstance(text, Fraction):
        eps = text
    elif isinstance(text, (int, float)):
        eps = Fraction(text)
    else:
        try:
            eps = Fraction(text.strip())
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"cannot parse ε {text!r}") from None
    if eps <= 0:
        raise ValueError("ε must be positive")
    return eps


# ---------------------------------------------------------------------------


def _radius_sq(r) -> DRoot2:
    return r if isinstance(r, DRoot2) else DRoot2.coerce(ZRoot2.coerce(r))


class Disk(ConvexRegion):
    """Closed disk of radius √radius_sq about the origin."""

    def __init__(self, radius_sq: Union[int, ZRoot2, DRoot2] = 1):
        self.radius_sq = _radius_sq(radius_sq)

    def __repr__(self) -> str:
        return f"Disk(radius_sq={self.radius_sq})"

    def contains(self, u: DOmega) -> bool:
        return u.norm_sqrt2() <= self.radius_sq

    def _radius(self) -> mpmath.mpf:
        return mpmath.sqrt(self.radius_sq.to_mpf(mpmath.mp.prec))

    def ellipse(self, prec: int) -> Ellipse:
        with mpmath.workprec(prec):
            r = self._radius() * (1 + _INFLATE)
            w = 1 / (r * r)
            return Ellipse((w, mpmath.mpf(0), w), (mpmath.mpf(0), mpmath.mpf(0)))

    def intersect_line(self, p, d, prec):
        with mpmath.workprec(prec):
            r2 = self.radius_sq.to_mpf(prec)
            a = d[0] ** 2 + d[1] ** 2
            b = 2 * (p[0] * d[0] + p[1] * d[1])
            c = p[0] ** 2 + p[1] ** 2 - r2
            disc = b * b - 4 * a * c
            if disc < 0:
                return None
            s = mpmath.sqrt(disc)
            pad = (abs(b) + s + 1) * mpmath.mpf(2) ** (-prec + 16) / a
            return ((-b - s) / (2 * a) - pad, (-b + s) / (2 * a) + pad)


class EpsilonRegion(ConvexRegion):
    """{u : |u|² ≤ ρ², u⃗·z⃗ ≥ ρ(1 - ε²/2)} with z = e^{-iθ/2}, ρ² = radius_sq."""

    def __init__(self, theta, eps, radius_sq: Union[int, ZRoot2, DRoot2] = 1):
        self.theta = Angle.parse(theta)
        self.eps = parse_epsilon(eps)
        self.radius_sq = _radius_sq(radius_sq)
        self.threshold = 1 - self.eps**2 / 2
        self.prec = working_precision(self.eps)

    def __repr__(self) -> str:
        return f"EpsilonRegion(theta={self.theta}, eps={self.eps}, radius_sq={self.radius_sq})"

    def precision_hint(self) -> int:
        return 3 * self.prec + 64

    def _rho(self, prec: int) -> RealInterval:
        return eval_ring_element(self.radius_sq, prec + 4).sqrt(prec + 4)

    def dot_interval(self, u: DOmega, prec: int) -> RealInterval:
        """Enclosure of u⃗·z⃗ = Re(u)cos(θ/2) - Im(u)sin(θ/2)."""
        c, s = self.theta.half_cos_sin(prec)
        x = eval_ring_element(u.real_part(), prec + 4)
        y = eval_ring_element(u.imag_part(), prec + 4)
        return x * c - y * s

    def halfplane_margin(self, u: DOmega, prec: int) -> RealInterval:
        rhs = self._rho(prec) * fraction_interval(self.threshold, prec + 4)
        return self.dot_interval(u, prec) - rhs

    def contains(self, u: DOmega) -> bool:
        if not u.norm_sqrt2() <= self.radius_sq:
            return False
        p = self.prec
        for _ in range(4):
            m = self.halfplane_margin(u, p)
            if m.lo >= 0:
                return True
            if m.hi < 0:
                return False
            p *= 2
        return False  # boundary tie: reject

    def _frame(self, prec: int):
        with mpmath.workprec(prec):
            t = self.theta.to_mpf(prec)
            z = (mpmath.cos(-t / 2), mpmath.sin(-t / 2))
            n = (-z[1], z[0])
            rho = self._rho(prec).mid()
            return z, n, rho

    def ellipse(self, prec: int) -> Ellipse:
        with mpmath.workprec(prec):
            z, n, rho = self._frame(prec)
            e2 = mpmath.mpf(self.eps.numerator) ** 2 / mpmath.mpf(self.eps.denominator) ** 2
            d = 1 - e2 / 2
            w = e2 / 2
            h = mpmath.sqrt(e2 * (1 - e2 / 4))  # √(1 - d²)
            ca = rho * (d + w / 2)
            a = rho * w / mpmath.sqrt(2) * (1 + _INFLATE)
            b = rho * h * mpmath.sqrt(2) * (1 + _INFLATE)
            ia, ib = 1 / (a * a), 1 / (b * b)
            D = (
                ia * z[0] * z[0] + ib * n[0] * n[0],
                ia * z[0] * z[1] + ib * n[0] * n[1],
                ia * z[1] * z[1] + ib * n[1] * n[1],
            )
            return Ellipse(D, (ca * z[0], ca * z[1]))

    def intersect_line(self, p, d, prec):
        with mpmath.workprec(prec):
            z, _, rho = self._frame(prec)
            chord = Disk(self.radius_sq).intersect_line(p, d, prec)
            if chord is None:
                return None
            t0, t1 = chord
            # (p + t d)·z ≥ ρ·threshold
            pz = p[0] * z[0] + p[1] * z[1]
            dz = d[0] * z[0] + d[1] * z[1]
            thr = rho * (1 - mpmath.mpf(self.eps.numerator) ** 2 / mpmath.mpf(self.eps.denominator) ** 2 / 2)
            pad = mpmath.mpf(2) ** (-prec + 16) * (abs(pz) + abs(thr) + 1)
            if dz == 0:
                return (t0, t1) if pz >= thr - pad else None
            tb = (thr - pz) / dz
            padt = pad / abs(dz)
            if dz > 0:
                t0 = max(t0, tb - padt)
            else:
                t1 = min(t1, tb + padt)
            return (t0, t1) if t0 <= t1 else None
