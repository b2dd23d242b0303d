"""Exact arithmetic in Z[√2], Z[ω], their dyadic localisations and Q(√2).

Conventions
-----------
* ``ZRoot2(a, b)`` is ``a + b√2``.
* ``ZOmega(a, b, c, d)`` is ``aω³ + bω² + cω + d`` with ``ω = e^{iπ/4}``.
* ``DRoot2(x, k)`` / ``DOmega(x, k)`` are ``x / √2^k`` kept in canonical
  form (``k`` is the least denominator exponent, ``k >= 0``).
* ``QRoot2(a, b, den)`` is ``(a + b√2) / den``; used for exact interval
  endpoints.

``bullet`` is the automorphism √2 ↦ −√2, ``dagger`` is complex conjugation.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import total_ordering
from typing import Union

import mpmath

IntLike = Union[int, "ZRoot2"]


def _rounddiv(x: int, y: int) -> int:
    """Nearest integer to x/y (ties upward), y > 0."""
    return (2 * x + y) // (2 * y)


def _sign_root2(a: int, b: int) -> int:
    """Exact sign of a + b√2."""
    if a >= 0 and b >= 0:
        return 0 if (a == 0 and b == 0) else 1
    if a <= 0 and b <= 0:
        return -1
    s = a * a - 2 * b * b
    if a > 0:
        return 1 if s > 0 else -1
    return 1 if s < 0 else -1


def _floor_root2(a: int, b: int) -> int:
    """Exact floor of a + b√2."""
    if b == 0:
        return a
    r = math.isqrt(2 * b * b)
    return a + r if b > 0 else a - r - 1


def _to_mpf_rel(a: int, b: int, den: int, prec: int) -> mpmath.mpf:
    """(a + b√2)/den to relative precision ``prec`` via exact floors."""
    if a == 0 and b == 0:
        return mpmath.mpf(0)
    big = max(abs(a), abs(b), 1).bit_length()
    nrm = abs(a * a - 2 * b * b)
    # |a + b√2| >= |a² - 2b²| / (|a| + |b|√2)
    mag = min(big, nrm.bit_length() - big - 2) - den.bit_length()
    shift = prec + 8 - mag
    while True:
        f = _floor_root2(a << shift, b << shift) // den if shift >= 0 else \
            _floor_root2(a, b) // (den << (-shift))
        if abs(f).bit_length() >= prec + 4:
            return mpmath.mpf(mpmath.libmp.from_man_exp(f, -shift, prec + 8, "n"))
        shift += prec + 8


# ---------------------------------------------------------------------------
# Z[√2]


@total_ordering
class ZRoot2:
    __slots__ = ("a", "b")

    def __init__(self, a: int = 0, b: int = 0):
        self.a = int(a)
        self.b = int(b)

    @staticmethod
    def coerce(x) -> ZRoot2:
        if isinstance(x, ZRoot2):
            return x
        if isinstance(x, int):
            return ZRoot2(x, 0)
        raise TypeError(f"cannot coerce {type(x).__name__} to ZRoot2")

    def __repr__(self) -> str:
        return f"ZRoot2({self.a}, {self.b})"

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        return f"{self.a}{'+' if self.b >= 0 else '-'}{abs(self.b)}*√2"

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.b == 0 and self.a == other
        if isinstance(other, ZRoot2):
            return self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("ZRoot2", self.a, self.b))

    def __lt__(self, other) -> bool:
        o = ZRoot2.coerce(other)
        return _sign_root2(self.a - o.a, self.b - o.b) < 0

    def __add__(self, other) -> ZRoot2:
        if isinstance(other, int):
            return ZRoot2(self.a + other, self.b)
        if isinstance(other, ZRoot2):
            return ZRoot2(self.a + other.a, self.b + other.b)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self) -> ZRoot2:
        return ZRoot2(-self.a, -self.b)

    def __sub__(self, other) -> ZRoot2:
        if isinstance(other, int):
            return ZRoot2(self.a - other, self.b)
        if isinstance(other, ZRoot2):
            return ZRoot2(self.a - other.a, self.b - other.b)
        return NotImplemented

    def __rsub__(self, other) -> ZRoot2:
        return (-self) + other

    def __mul__(self, other) -> ZRoot2:
        if isinstance(other, int):
            return ZRoot2(self.a * other, self.b * other)
        if isinstance(other, ZRoot2):
            a, b, c, d = self.a, self.b, other.a, other.b
            return ZRoot2(a * c + 2 * b * d, a * d + b * c)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int) -> ZRoot2:
        if n < 0:
            return self.unit_inverse() ** (-n)
        result, base = ZRoot2(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    def __float__(self) -> float:
        return float(self.to_mpf(64))

    def sign(self) -> int:
        return _sign_root2(self.a, self.b)

    def __abs__(self) -> ZRoot2:
        return -self if self.sign() < 0 else self

    def bullet(self) -> ZRoot2:
        return ZRoot2(self.a, -self.b)

    def norm(self) -> int:
        return self.a * self.a - 2 * self.b * self.b

    def times_sqrt2(self) -> ZRoot2:
        return ZRoot2(2 * self.b, self.a)

    def sqrt2_divides(self) -> bool:
        return self.a % 2 == 0

    def div_sqrt2(self) -> ZRoot2:
        if self.a % 2:
            raise ArithmeticError(f"√2 does not divide {self}")
        return ZRoot2(self.b, self.a // 2)

    def is_unit(self) -> bool:
        return abs(self.norm()) == 1

    def unit_inverse(self) -> ZRoot2:
        n = self.norm()
        if n not in (1, -1):
            raise ZeroDivisionError(f"{self} is not a unit")
        return ZRoot2(self.a * n, -self.b * n)

    def divides(self, other: IntLike) -> bool:
        o = ZRoot2.coerce(other)
        if not self:
            return not o
        n = self.norm()
        p = o * self.bullet()
        return p.a % n == 0 and p.b % n == 0

    def exact_div(self, other: IntLike) -> ZRoot2:
        o = ZRoot2.coerce(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Z[√2]")
        p = self * o.bullet()
        if p.a % n or p.b % n:
            raise ArithmeticError(f"{o} does not divide {self}")
        return ZRoot2(p.a // n, p.b // n)

    def __divmod__(self, other) -> tuple[ZRoot2, ZRoot2]:
        o = ZRoot2.coerce(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Z[√2]")
        p = self * o.bullet()
        if n < 0:
            p, n = -p, -n
        q = ZRoot2(_rounddiv(p.a, n), _rounddiv(p.b, n))
        return q, self - q * o

    def __floordiv__(self, other) -> ZRoot2:
        return divmod(self, other)[0]

    def __mod__(self, other) -> ZRoot2:
        return divmod(self, other)[1]

    def to_mpf(self, prec: int = 53) -> mpmath.mpf:
        """Value as an mpf with about ``prec`` correct leading bits."""
        return _to_mpf_rel(self.a, self.b, 1, prec)

    def to_zomega(self) -> ZOmega:
        return ZOmega(-self.b, 0, self.b, self.a)

    def is_doubly_positive(self) -> bool:
        return self.sign() >= 0 and self.bullet().sign() >= 0


LAMBDA = ZRoot2(1, 1)
LAMBDA_INV = ZRoot2(-1, 1)
SQRT2 = ZRoot2(0, 1)


def lambda_power(m: int) -> ZRoot2:
    return LAMBDA**m if m >= 0 else LAMBDA_INV ** (-m)


def lambda_log(x: ZRoot2) -> int:
    """Integer m minimising |log_λ |x| - m|, for nonzero x (approximate)."""
    val = mpmath.log(abs(x.to_mpf(64)))
    return int(mpmath.nint(val / mpmath.log(1 + mpmath.sqrt(2))))


# ---------------------------------------------------------------------------
# Z[ω]


class ZOmega:
    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: int = 0, b: int = 0, c: int = 0, d: int = 0):
        self.a = int(a)
        self.b = int(b)
        self.c = int(c)
        self.d = int(d)

    @staticmethod
    def coerce(x) -> ZOmega:
        if isinstance(x, ZOmega):
            return x
        if isinstance(x, int):
            return ZOmega(0, 0, 0, x)
        if isinstance(x, ZRoot2):
            return x.to_zomega()
        raise TypeError(f"cannot coerce {type(x).__name__} to ZOmega")

    def coeffs(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __repr__(self) -> str:
        return f"ZOmega({self.a}, {self.b}, {self.c}, {self.d})"

    def __str__(self) -> str:
        return format_zomega(self)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, ZRoot2)):
            other = ZOmega.coerce(other)
        if isinstance(other, ZOmega):
            return self.coeffs() == other.coeffs()
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("ZOmega",) + self.coeffs())

    def __bool__(self) -> bool:
        return any(self.coeffs())

    def __add__(self, other) -> ZOmega:
        try:
            o = ZOmega.coerce(other)
        except TypeError:
            return NotImplemented
        return ZOmega(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    __radd__ = __add__

    def __neg__(self) -> ZOmega:
        return ZOmega(-self.a, -self.b, -self.c, -self.d)

    def __sub__(self, other) -> ZOmega:
        try:
            o = ZOmega.coerce(other)
        except TypeError:
            return NotImplemented
        return ZOmega(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def __rsub__(self, other) -> ZOmega:
        return (-self) + other

    def __mul__(self, other) -> ZOmega:
        if isinstance(other, int):
            return ZOmega(self.a * other, self.b * other, self.c * other, self.d * other)
        try:
            o = ZOmega.coerce(other)
        except TypeError:
            return NotImplemented
        a, b, c, d = self.coeffs()
        e, f, g, h = o.coeffs()
        # ω⁴ = -1
        return ZOmega(
            a * h + b * g + c * f + d * e,
            b * h + c * g + d * f - a * e,
            c * h + d * g - a * f - b * e,
            d * h - a * g - b * f - c * e,
        )

    __rmul__ = __mul__

    def __pow__(self, n: int) -> ZOmega:
        if n < 0:
            raise ValueError("negative powers are not defined in Z[ω]")
        result, base = ZOmega(0, 0, 0, 1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def bullet(self) -> ZOmega:
        return ZOmega(-self.a, self.b, -self.c, self.d)

    def dagger(self) -> ZOmega:
        return ZOmega(-self.c, -self.b, -self.a, self.d)

    def mul_omega(self, j: int = 1) -> ZOmega:
        x = self
        for _ in range(j % 8):
            x = ZOmega(x.b, x.c, x.d, -x.a)
        return x

    def times_sqrt2(self) -> ZOmega:
        a, b, c, d = self.coeffs()
        return ZOmega(b - d, c + a, d + b, c - a)

    def sqrt2_divides(self) -> bool:
        return (self.a - self.c) % 2 == 0 and (self.b - self.d) % 2 == 0

    def div_sqrt2(self) -> ZOmega:
        a, b, c, d = self.coeffs()
        if (a - c) % 2 or (b - d) % 2:
            raise ArithmeticError(f"√2 does not divide {self!r}")
        return ZOmega((b - d) // 2, (c + a) // 2, (d + b) // 2, (c - a) // 2)

    def delta_divides(self) -> bool:
        return (self.a + self.b + self.c + self.d) % 2 == 0

    def div_delta(self) -> ZOmega:
        a, b, c, d = self.coeffs()
        if (a + b + c + d) % 2:
            raise ArithmeticError(f"δ does not divide {self!r}")
        return ZOmega(
            (a - b + c - d) // 2,
            (a + b - c + d) // 2,
            (-a + b + c - d) // 2,
            (a - b + c + d) // 2,
        )

    def is_real(self) -> bool:
        return self.b == 0 and self.a == -self.c

    def to_zroot2(self) -> ZRoot2:
        if not self.is_real():
            raise ValueError(f"{self!r} is not in Z[√2]")
        return ZRoot2(self.d, self.c)

    def norm_sqrt2(self) -> ZRoot2:
        """u†u as an element of Z[√2]."""
        a, b, c, d = self.coeffs()
        return ZRoot2(a * a + b * b + c * c + d * d, c * d + b * c + a * b - d * a)

    def norm(self) -> int:
        """Integer norm (u†u)•(u†u)."""
        return self.norm_sqrt2().norm()

    def real_part(self) -> QRoot2:
        return QRoot2(2 * self.d, self.c - self.a, 2)

    def imag_part(self) -> QRoot2:
        return QRoot2(2 * self.b, self.c + self.a, 2)

    def to_complex(self, prec: int = 53) -> mpmath.mpc:
        return mpmath.mpc(self.real_part().to_mpf(prec), self.imag_part().to_mpf(prec))

    def is_unit(self) -> bool:
        return self.norm() == 1

    def divides(self, other) -> bool:
        o = ZOmega.coerce(other)
        n = self.norm()
        if n == 0:
            return not o
        p = o * self.dagger() * self.norm_sqrt2().bullet().to_zomega()
        return all(x % n == 0 for x in p.coeffs())

    def exact_div(self, other) -> ZOmega:
        o = ZOmega.coerce(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Z[ω]")
        p = self * o.dagger() * o.norm_sqrt2().bullet().to_zomega()
        if any(x % n for x in p.coeffs()):
            raise ArithmeticError(f"{o!r} does not divide {self!r}")
        return ZOmega(*(x // n for x in p.coeffs()))

    def __divmod__(self, other) -> tuple[ZOmega, ZOmega]:
        o = ZOmega.coerce(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Z[ω]")
        p = self * o.dagger() * o.norm_sqrt2().bullet().to_zomega()
        q = ZOmega(*(_rounddiv(x, n) for x in p.coeffs()))
        return q, self - q * o

    def __floordiv__(self, other) -> ZOmega:
        return divmod(self, other)[0]

    def __mod__(self, other) -> ZOmega:
        return divmod(self, other)[1]


OMEGA = ZOmega(0, 0, 1, 0)
I_UNIT = ZOmega(0, 1, 0, 0)
DELTA = ZOmega(0, 0, 1, 1)
ONE = ZOmega(0, 0, 0, 1)
ZERO = ZOmega(0, 0, 0, 0)


def omega_power(j: int) -> ZOmega:
    return ONE.mul_omega(j)


# ---------------------------------------------------------------------------
# Q(√2) with rational denominators (exact interval endpoints)


@total_ordering
class QRoot2:
    __slots__ = ("a", "b", "den")

    def __init__(self, a: int, b: int = 0, den: int = 1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            a, b, den = -a, -b, -den
        g = math.gcd(math.gcd(a, b), den)
        if g > 1:
            a, b, den = a // g, b // g, den // g
        self.a, self.b, self.den = a, b, den

    @staticmethod
    def coerce(x) -> QRoot2:
        if isinstance(x, QRoot2):
            return x
        if isinstance(x, bool):
            raise TypeError("bool is not a real bound")
        if isinstance(x, int):
            return QRoot2(x)
        if isinstance(x, Fraction):
            return QRoot2(x.numerator, 0, x.denominator)
        if isinstance(x, ZRoot2):
            return QRoot2(x.a, x.b)
        if isinstance(x, DRoot2):
            return x.to_qroot2()
        if isinstance(x, float):
            return QRoot2.coerce(Fraction(x))
        if isinstance(x, mpmath.mpf):
            sign, man, exp, _ = x._mpf_
            if not man:
                if exp != 0:
                    raise ValueError("cannot use a non-finite mpf as an exact real")
                return QRoot2(0)
            man = -int(man) if sign else int(man)
            if exp >= 0:
                return QRoot2(int(man) << exp)
            return QRoot2(int(man), 0, 1 << (-exp))
        raise TypeError(f"cannot use {type(x).__name__} as an exact real")

    def __repr__(self) -> str:
        return f"QRoot2({self.a}, {self.b}, {self.den})"

    def __eq__(self, other) -> bool:
        try:
            o = QRoot2.coerce(other)
        except TypeError:
            return NotImplemented
        return (self.a, self.b, self.den) == (o.a, o.b, o.den)

    def __hash__(self) -> int:
        return hash(("QRoot2", self.a, self.b, self.den))

    def __lt__(self, other) -> bool:
        return (self - QRoot2.coerce(other)).sign() < 0

    def __add__(self, other) -> QRoot2:
        o = QRoot2.coerce(other)
        if self.den == o.den:
            return QRoot2(self.a + o.a, self.b + o.b, self.den)
        return QRoot2(self.a * o.den + o.a * self.den, self.b * o.den + o.b * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> QRoot2:
        return QRoot2(-self.a, -self.b, self.den)

    def __sub__(self, other) -> QRoot2:
        return self + (-QRoot2.coerce(other))

    def __rsub__(self, other) -> QRoot2:
        return QRoot2.coerce(other) - self

    def __mul__(self, other) -> QRoot2:
        o = QRoot2.coerce(other)
        return QRoot2(self.a * o.a + 2 * self.b * o.b, self.a * o.b + self.b * o.a, self.den * o.den)

    __rmul__ = __mul__

    def sign(self) -> int:
        return _sign_root2(self.a, self.b)

    def bullet(self) -> QRoot2:
        return QRoot2(self.a, -self.b, self.den)

    def floor(self) -> int:
        return _floor_root2(self.a, self.b) // self.den

    def ceil(self) -> int:
        return -(-self).floor()

    def scaled_floor(self, bits: int) -> int:
        """floor(self · 2^bits), exact (bits may be negative)."""
        a, b, den = self.a, self.b, self.den
        if bits >= 0:
            return _floor_root2(a << bits, b << bits) // den
        return _floor_root2(a, b) // (den << (-bits))

    def to_mpf(self, prec: int = 53) -> mpmath.mpf:
        """Value as an mpf with about ``prec`` correct leading bits."""
        return _to_mpf_rel(self.a, self.b, self.den, prec)


# ---------------------------------------------------------------------------
# dyadic localisations


class DRoot2:
    """x / √2^k with x ∈ Z[√2], canonical (least k >= 0)."""

    __slots__ = ("value", "k")

    def __init__(self, value, k: int = 0):
        v = ZRoot2.coerce(value)
        if k < 0:
            v = v * ZRoot2(0, 1) ** (-k)
            k = 0
        while k > 0 and v.a % 2 == 0:
            v = ZRoot2(v.b, v.a // 2)
            k -= 1
        self.value, self.k = v, k

    @staticmethod
    def coerce(x) -> DRoot2:
        if isinstance(x, DRoot2):
            return x
        return DRoot2(ZRoot2.coerce(x), 0)

    def __repr__(self) -> str:
        return f"DRoot2({self.value!r}, {self.k})"

    def __str__(self) -> str:
        if self.k == 0:
            return str(self.value)
        return f"√2^-{self.k} * ({self.value})"

    def __eq__(self, other) -> bool:
        try:
            o = DRoot2.coerce(other)
        except TypeError:
            return NotImplemented
        return self.k == o.k and self.value == o.value

    def __hash__(self) -> int:
        return hash(("DRoot2", self.value, self.k))

    def _scaled(self, k: int) -> ZRoot2:
        v = self.value
        for _ in range(k - self.k):
            v = v.times_sqrt2()
        return v

    def __add__(self, other) -> DRoot2:
        try:
            o = DRoot2.coerce(other)
        except TypeError:
            return NotImplemented
        k = max(self.k, o.k)
        return DRoot2(self._scaled(k) + o._scaled(k), k)

    __radd__ = __add__

    def __neg__(self) -> DRoot2:
        return DRoot2(-self.value, self.k)

    def __sub__(self, other) -> DRoot2:
        return self + (-DRoot2.coerce(other))

    def __rsub__(self, other) -> DRoot2:
        return DRoot2.coerce(other) - self

    def __mul__(self, other) -> DRoot2:
        try:
            o = DRoot2.coerce(other)
        except TypeError:
            return NotImplemented
        return DRoot2(self.value * o.value, self.k + o.k)

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return bool(self.value)

    def bullet(self) -> DRoot2:
        v = self.value.bullet()
        return DRoot2(-v if self.k % 2 else v, self.k)

    def sign(self) -> int:
        return self.value.sign()

    def __lt__(self, other) -> bool:
        return (self - DRoot2.coerce(other)).sign() < 0

    def __le__(self, other) -> bool:
        return (self - DRoot2.coerce(other)).sign() <= 0

    def __gt__(self, other) -> bool:
        return (self - DRoot2.coerce(other)).sign() > 0

    def __ge__(self, other) -> bool:
        return (self - DRoot2.coerce(other)).sign() >= 0

    def is_doubly_positive(self) -> bool:
        return self.sign() >= 0 and self.bullet().sign() >= 0

    def to_qroot2(self) -> QRoot2:
        a, b, k = self.value.a, self.value.b, self.k
        if k % 2 == 0:
            return QRoot2(a, b, 1 << (k // 2))
        return QRoot2(2 * b, a, 1 << ((k + 1) // 2))

    def to_mpf(self, prec: int = 53) -> mpmath.mpf:
        return self.to_qroot2().to_mpf(prec)

    def to_domega(self) -> DOmega:
        return DOmega(self.value.to_zomega(), self.k)


class DOmega:
    """x / √2^k with x ∈ Z[ω], canonical (least k >= 0)."""

    __slots__ = ("value", "k")

    def __init__(self, value, k: int = 0):
        v = ZOmega.coerce(value)
        if k < 0:
            for _ in range(-k):
                v = v.times_sqrt2()
            k = 0
        while k > 0 and v.sqrt2_divides():
            v = v.div_sqrt2()
            k -= 1
        self.value, self.k = v, k

    @staticmethod
    def coerce(x) -> DOmega:
        if isinstance(x, DOmega):
            return x
        if isinstance(x, DRoot2):
            return x.to_domega()
        return DOmega(ZOmega.coerce(x), 0)

    def __repr__(self) -> str:
        return f"DOmega({self.value!r}, {self.k})"

    def __str__(self) -> str:
        return format_domega(self)

    def __eq__(self, other) -> bool:
        try:
            o = DOmega.coerce(other)
        except TypeError:
            return NotImplemented
        return self.k == o.k and self.value == o.value

    def __hash__(self) -> int:
        return hash(("DOmega", self.value, self.k))

    def _scaled(self, k: int) -> ZOmega:
        v = self.value
        for _ in range(k - self.k):
            v = v.times_sqrt2()
        return v

    def scaled_to(self, k: int) -> ZOmega:
        """√2^k · self as an element of Z[ω] (requires k >= lde)."""
        if k < self.k:
            raise ValueError(f"denominator exponent {self.k} exceeds {k}")
        return self._scaled(k)

    def __add__(self, other) -> DOmega:
        try:
            o = DOmega.coerce(other)
        except TypeError:
            return NotImplemented
        k = max(self.k, o.k)
        return DOmega(self._scaled(k) + o._scaled(k), k)

    __radd__ = __add__

    def __neg__(self) -> DOmega:
        return DOmega(-self.value, self.k)

    def __sub__(self, other) -> DOmega:
        return self + (-DOmega.coerce(other))

    def __rsub__(self, other) -> DOmega:
        return DOmega.coerce(other) - self

    def __mul__(self, other) -> DOmega:
        try:
            o = DOmega.coerce(other)
        except TypeError:
            return NotImplemented
        return DOmega(self.value * o.value, self.k + o.k)

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return bool(self.value)

    def bullet(self) -> DOmega:
        v = self.value.bullet()
        return DOmega(-v if self.k % 2 else v, self.k)

    def dagger(self) -> DOmega:
        return DOmega(self.value.dagger(), self.k)

    def mul_omega(self, j: int = 1) -> DOmega:
        return DOmega(self.value.mul_omega(j), self.k)

    def norm_sqrt2(self) -> DRoot2:
        """u†u as an element of D[√2]."""
        return DRoot2(self.value.norm_sqrt2(), 2 * self.k)

    def real_part(self) -> QRoot2:
        q = self.value.real_part()
        return q * DRoot2(ZRoot2(1), self.k).to_qroot2()

    def imag_part(self) -> QRoot2:
        q = self.value.imag_part()
        return q * DRoot2(ZRoot2(1), self.k).to_qroot2()

    def to_complex(self, prec: int = 53) -> mpmath.mpc:
        return mpmath.mpc(self.real_part().to_mpf(prec), self.imag_part().to_mpf(prec))

    def is_real(self) -> bool:
        return self.value.is_real()

    def to_droot2(self) -> DRoot2:
        return DRoot2(self.value.to_zroot2(), self.k)

    def div_delta(self) -> DOmega:
        """self / δ using δ⁻¹ = (ω - i)/√2."""
        return DOmega((self.value * ZOmega(0, -1, 1, 0)), self.k + 1)


# ---------------------------------------------------------------------------
# units of Z[√2]


class Unit:
    """(-1)^n λ^m, a unit of Z[√2]."""

    __slots__ = ("n", "m")

    def __init__(self, n: int, m: int):
        self.n = n % 2
        self.m = m

    def __repr__(self) -> str:
        return f"Unit(n={self.n}, m={self.m})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Unit) and (self.n, self.m) == (other.n, other.m)

    def __hash__(self) -> int:
        return hash(("Unit", self.n, self.m))

    def value(self) -> ZRoot2:
        v = lambda_power(self.m)
        return -v if self.n else v

    @staticmethod
    def from_zroot2(u: ZRoot2) -> Unit:
        if not u.is_unit():
            raise ValueError(f"{u} is not a unit")
        n = 1 if u.sign() < 0 else 0
        mag = abs(u)
        m = lambda_log(mag)
        if lambda_power(m) != mag:
            for cand in (m - 1, m + 1):
                if lambda_power(cand) == mag:
                    m = cand
                    break
            else:  # pragma: no cover - lambda_log is accurate to ±1
                raise ArithmeticError("failed to identify unit")
        return Unit(n, m)

    def is_doubly_positive(self) -> bool:
        return self.value().is_doubly_positive()

    def is_square(self) -> bool:
        return self.n == 0 and self.m % 2 == 0

    def sqrt(self) -> Unit:
        if not self.is_square():
            raise ValueError(f"{self} is not a square")
        return Unit(0, self.m // 2)


# ---------------------------------------------------------------------------
# exponents, decomposition, gcd


def least_denom_exponent(u) -> int:
    return DOmega.coerce(u).k


def delta_exponent(u) -> int:
    """Least j with δ^j·u ∈ Z[ω]."""
    u = DOmega.coerce(u)
    # √2 = δ²·(λω)⁻¹, so δ^{2k}u = (λω)^k · √2^k u
    lam_omega = ZOmega(0, 1, 1, 1)  # λω = 1 + ω + ω²
    w = u.value * lam_omega**u.k
    j = 2 * u.k
    while j > 0 and w.delta_divides():
        w = w.div_delta()
        j -= 1
    return j


def decompose_real_imag(u: ZOmega) -> tuple[ZRoot2, ZRoot2, ZOmega]:
    """Write u = α + βi + offset with offset ∈ {0, ω}."""
    a, b, c, d = u.coeffs()
    if (c - a) % 2 == 0:
        return ZRoot2(d, (c - a) // 2), ZRoot2(b, (c + a) // 2), ZERO
    # subtract ω: (a, b, c-1, d)
    c1 = c - 1
    return ZRoot2(d, (c1 - a) // 2), ZRoot2(b, (c1 + a) // 2), OMEGA


def canonical_associate(x):
    """Deterministic representative of the associate class of x."""
    if isinstance(x, ZRoot2):
        if not x:
            return x
        y = abs(x)
        m = lambda_log(y)
        y = y * lambda_power(-m)
        while y < 1:
            y = y * LAMBDA
        while not y < LAMBDA:
            y = y * LAMBDA_INV
        return y
    if isinstance(x, ZOmega):
        if not x:
            return x
        # balance |x|² against |x•|² with a λ-power: y = x·λ^-m has
        # λ^-2 ≤ |y|²/|y•|² < λ², decided exactly
        n1 = x.norm_sqrt2()
        ratio = n1.to_mpf(64) / n1.bullet().to_mpf(64)
        m = int(mpmath.nint(mpmath.log(ratio) / (4 * mpmath.log(1 + mpmath.sqrt(2)))))

        def parts(m):
            return n1 * lambda_power(2 - 2 * m), n1.bullet() * lambda_power(2 * m), n1 * lambda_power(-2 - 2 * m)

        while True:
            hi, mid, lo = parts(m)
            if lo >= mid:  # ratio_y ≥ λ²
                m += 1
            elif hi < mid:  # ratio_y < λ^-2
                m -= 1
            else:
                break
        y = x * lambda_power(-m).to_zomega()
        return max((y.mul_omega(j) for j in range(8)), key=lambda z: z.coeffs()[::-1])
    raise TypeError(f"no associate normalisation for {type(x).__name__}")


def gcd(x, y):
    """Euclidean gcd in Z[√2] or Z[ω], canonicalised."""
    if isinstance(x, ZOmega) or isinstance(y, ZOmega):
        x, y = ZOmega.coerce(x), ZOmega.coerce(y)
    else:
        x, y = ZRoot2.coerce(x), ZRoot2.coerce(y)
    if not x and not y:
        raise ValueError("gcd(0, 0) is undefined")
    while y:
        x, y = y, x % y
    return canonical_associate(x)


def gcd_raw(x, y):
    """Euclidean gcd without associate normalisation."""
    while y:
        x, y = y, x % y
    return x


def associates(x, y) -> bool:
    if not x or not y:
        return not x and not y
    return x.divides(y) and y.divides(x)


# ---------------------------------------------------------------------------
# text rendering / parsing


def format_zomega(u: ZOmega) -> str:
    terms = []
    for coeff, mono in zip(u.coeffs(), ("*w^3", "*w^2", "*w", "")):
        if coeff:
            terms.append(f"{coeff:+d}{mono}")
    if not terms:
        return "0"
    s = "".join(terms)
    return s[1:] if s.startswith("+") else s


def format_domega(u: DOmega) -> str:
    body = format_zomega(u.value)
    if u.k == 0:
        return body
    return f"√2^-{u.k} * ({body})"


_TERM = re.compile(r"([+-]?)\s*(\d+)\s*(?:\*?\s*w(?:\s*\^\s*(\d))?)?|([+-]?)\s*w(?:\s*\^\s*(\d))?")
_PREFIX = re.compile(r"^\s*(?:√2|sqrt2|r2)\s*\^\s*(-?\d+)\s*\*\s*\((.*)\)\s*$")


def parse_zomega(text: str) -> ZOmega:
    s = text.replace(" ", "")
    if s in ("", "0"):
        return ZERO
    coeff = [0, 0, 0, 0]  # index = power of ω
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse Z[ω] element: {text!r}")
        if m.group(2) is not None:
            sign, num, powtxt = m.group(1), int(m.group(2)), m.group(3)
            has_w = "w" in m.group(0)
            power = int(powtxt) if powtxt else (1 if has_w else 0)
        else:
            sign, num, powtxt = m.group(4), 1, m.group(5)
            power = int(powtxt) if powtxt else 1
        if pos > 0 and not sign:
            raise ValueError(f"missing sign in {text!r}")
        if power > 3:
            raise ValueError(f"power of ω must be at most 3 in {text!r}")
        coeff[power] += -num if sign == "-" else num
        pos = m.end()
    return ZOmega(coeff[3], coeff[2], coeff[1], coeff[0])


def parse_domega(text: str) -> DOmega:
    m = _PREFIX.match(text)
    if m:
        e = int(m.group(1))
        return DOmega(parse_zomega(m.group(2)), -e)
    s = text.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    return DOmega(parse_zomega(s), 0)
