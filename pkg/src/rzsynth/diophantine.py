"""The norm equation t†t = ξ for ξ ∈ D[√2], t ∈ D[ω].

Solving reduces to factoring the integer n with ξ•ξ = n / 2^ℓ: each rational
prime p | n is split in Z[√2], each Z[√2]-prime is lifted to Z[ω] by a gcd,
and the product is corrected by a unit. Primes p ≡ 7 (mod 8) appearing to an
odd power make the equation unsolvable.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable, Optional

from .rings import (
    DELTA,
    DOmega,
    DRoot2,
    ZOmega,
    ZRoot2,
    Unit,
    canonical_associate,
    gcd_raw,
)

# ---------------------------------------------------------------------------
# integer factoring


def _small_primes(limit: int) -> list[int]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i, f in enumerate(sieve) if f]


TRIAL_LIMIT = 10_000
SMALL_PRIMES = _small_primes(TRIAL_LIMIT)
_MR_BASES = SMALL_PRIMES[:24]
RHO_ROUND_STEPS = 4096


def is_probable_prime(n: int) -> bool:
    """Miller–Rabin with fixed bases (provably correct below 3.3·10²⁴)."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases = _MR_BASES[:13] if n < 3_317_044_064_679_887_385_961_981 else _MR_BASES
    for a in bases:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FactoringOutcome:
    factored: bool
    factors: tuple = ()  # ((p, e), ...) sorted by p
    effort: int = 0

    def product(self) -> int:
        out = 1
        for p, e in self.factors:
            out *= p**e
        return out


def _rho_round(n: int, rng: random.Random) -> Optional[int]:
    """One Brent-style Pollard rho attempt with a fresh random polynomial."""
    y = rng.randrange(1, n)
    c = rng.randrange(1, n)
    m = 128
    g = r = q = 1
    x = ys = y
    steps = 0
    while g == 1 and steps < RHO_ROUND_STEPS:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        steps += r
        r *= 2
    if g == n:
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
    return g if 1 < g < n else None


def factorize(n: int, effort: Optional[int] = 25, seed: int = 0) -> FactoringOutcome:
    """Prime factorisation of |n|, or a timed-out outcome.

    ``effort`` bounds the number of Pollard rho rounds; ``None`` means no cap.
    """
    if n == 0:
        raise ValueError("cannot factor 0")
    n = abs(n)
    if n == 1:
        return FactoringOutcome(True, ())
    counts: dict[int, int] = {}
    if is_probable_prime(n):
        return FactoringOutcome(True, ((n, 1),))
    for p in SMALL_PRIMES:
        if p * p > n:
            break
        while n % p == 0:
            counts[p] = counts.get(p, 0) + 1
            n //= p
    rng = random.Random(seed)
    spent = 0
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_probable_prime(m):
            counts[m] = counts.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        d = None
        while d is None:
            if effort is not None and spent >= effort:
                return FactoringOutcome(False, (), spent)
            spent += 1
            d = _rho_round(m, rng)
        stack += [d, m // d]
    return FactoringOutcome(True, tuple(sorted(counts.items())), spent)


FactoringProvider = Callable[[int], FactoringOutcome]


def capped_provider(effort: Optional[int] = 25, seed: int = 0) -> FactoringProvider:
    def provide(n: int) -> FactoringOutcome:
        return factorize(n, effort, seed)

    return provide


def table_provider(table: dict, fallback: Optional[FactoringProvider] = None) -> FactoringProvider:
    """Factorisations looked up by n; unknown n go to ``fallback``."""
    norm = {}
    for key, facs in table.items():
        pairs = tuple(sorted((int(p), int(e)) for p, e in facs))
        out = FactoringOutcome(True, pairs)
        if out.product() != abs(int(key)) or not all(is_probable_prime(p) for p, _ in pairs):
            raise ValueError(f"invalid factorisation supplied for {key}")
        norm[abs(int(key))] = out
    fallback = fallback or capped_provider()

    def provide(n: int) -> FactoringOutcome:
        return norm.get(abs(n)) or fallback(n)

    return provide


# ---------------------------------------------------------------------------
# modular square roots and prime splitting


def sqrt_mod(a: int, p: int, seed: int = 0) -> Optional[int]:
    """x with x² ≡ a (mod p) for an odd prime p, or None if a is a non-residue."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    rng = random.Random(seed)
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z = rng.randrange(2, p)
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


@dataclass(frozen=True)
class Ramified:
    xi: ZRoot2 = ZRoot2(0, 1)


@dataclass(frozen=True)
class Inert:
    p: int


@dataclass(frozen=True)
class Split:
    xi: ZRoot2


def split_prime(p: int, seed: int = 0):
    """Decomposition of a rational prime in Z[√2]."""
    if p == 2:
        return Ramified()
    if p % 8 in (3, 5):
        return Inert(p)
    x = sqrt_mod(2, p, seed)
    x = min(x, p - x)
    return Split(canonical_associate(gcd_raw(ZRoot2(p), ZRoot2(x, 1))))


# ---------------------------------------------------------------------------
# lifting to Z[ω]


UNSOLVABLE = "unsolvable"


def _multiplicity(x: ZRoot2, eta: ZRoot2) -> tuple[int, ZRoot2]:
    m = 0
    while x and eta.divides(x):
        x = x.exact_div(eta)
        m += 1
    return m, x


@dataclass(frozen=True)
class PrimeFactor:
    eta: ZRoot2  # prime of Z[√2]
    p: int  # rational prime below eta
    m: int  # multiplicity


def factor_zroot2(xi: ZRoot2, factors, seed: int = 0) -> tuple[list[PrimeFactor], ZRoot2]:
    """Prime factorisation of xi in Z[√2] from that of |N(xi)|; returns (factors, unit)."""
    rest = xi
    out: list[PrimeFactor] = []
    for p, e in factors:
        sp = split_prime(p, seed)
        if isinstance(sp, Ramified):
            m, rest = _multiplicity(rest, sp.xi)
            if m != e:
                raise ValueError("inconsistent factorisation at 2")
            out.append(PrimeFactor(sp.xi, 2, m))
        elif isinstance(sp, Inert):
            if e % 2:
                raise ValueError(f"inert prime {p} with odd exponent in the norm")
            m, rest = _multiplicity(rest, ZRoot2(p))
            if m != e // 2:
                raise ValueError(f"inconsistent factorisation at {p}")
            out.append(PrimeFactor(ZRoot2(p), p, m))
        else:
            eta = sp.xi
            m1, rest = _multiplicity(rest, eta)
            m2, rest = _multiplicity(rest, eta.bullet())
            if m1 + m2 != e:
                raise ValueError(f"inconsistent factorisation at {p}")
            if m1:
                out.append(PrimeFactor(eta, p, m1))
            if m2:
                out.append(PrimeFactor(eta.bullet(), p, m2))
    if not rest.is_unit():
        raise ValueError("factorisation does not account for the whole norm")
    return out, rest


def _lift_prime(f: PrimeFactor, seed: int) -> Optional[ZOmega]:
    """t with t†t ~ eta^m, or None when impossible."""
    p = f.p
    if p == 2:
        return DELTA**f.m
    if p % 8 == 7:
        if f.m % 2:
            return None
        return f.eta.to_zomega() ** (f.m // 2)
    if p % 4 == 1:
        u = sqrt_mod(-1, p, seed)
        s = gcd_raw(f.eta.to_zomega(), ZOmega(0, 1, 0, u))  # u + i
    else:  # p ≡ 3 (mod 8)
        u = sqrt_mod(-2, p, seed)
        s = gcd_raw(f.eta.to_zomega(), ZOmega(1, 0, 1, u))  # u + i√2 = u + ω + ω³
    return s**f.m


def decompose_assoc(xi: ZRoot2, factors: list[PrimeFactor], seed: int = 0):
    """t ∈ Z[ω] with t†t ~ xi, or UNSOLVABLE."""
    t = ZOmega(0, 0, 0, 1)
    for f in factors:
        s = _lift_prime(f, seed)
        if s is None:
            return UNSOLVABLE
        t = t * s
    return t


def _ratio_unit(xi: DRoot2, y: DRoot2) -> ZRoot2:
    """The unit u with xi = u·y (both nonzero, associated)."""
    a, b = xi.value, y.value
    if y.k >= xi.k:
        for _ in range(y.k - xi.k):
            a = a.times_sqrt2()
    else:
        for _ in range(xi.k - y.k):
            b = b.times_sqrt2()
    return a.exact_div(b)


def fix_unit(t0: DOmega, xi: DRoot2) -> DOmega:
    """Rescale t0 by a real unit so that t†t = xi exactly."""
    xi = DRoot2.coerce(xi)
    if not xi.is_doubly_positive():
        raise ValueError("ξ is not doubly positive")
    u = _ratio_unit(xi, t0.norm_sqrt2())
    unit = Unit.from_zroot2(u)
    if not unit.is_square():
        raise ArithmeticError("relating unit is not a square")
    v = unit.sqrt().value()
    return t0 * DOmega(v.to_zomega(), 0)


@dataclass(frozen=True)
class NormEquationInstance:
    xi: DRoot2
    n: int
    ell: int

    @staticmethod
    def from_xi(xi) -> NormEquationInstance:
        xi = DRoot2.coerce(xi)
        if not xi:
            return NormEquationInstance(xi, 0, 0)
        m = xi.k
        n = xi.value.norm() * (-1) ** m
        ell = m
        while ell > 0 and n % 2 == 0:
            n //= 2
            ell -= 1
        return NormEquationInstance(xi, n, ell)


SOLVED, UNSOLVED, TIMED_OUT = "solved", "unsolvable", "timed_out"


@dataclass
class NormSolution:
    status: str
    t: Optional[DOmega] = None
    factoring: Optional[FactoringOutcome] = None


DELTA_INV_NUM = ZOmega(0, -1, 1, 0)  # δ⁻¹ = (ω - i)/√2


def solve_norm_equation(
    inst: NormEquationInstance,
    factoring: Optional[FactoringOutcome] = None,
    seed: int = 0,
) -> NormSolution:
    """Solve t†t = ξ given a factorisation of n (computed here if absent)."""
    xi = inst.xi
    if not xi:
        return NormSolution(SOLVED, DOmega(0))
    if not xi.is_doubly_positive():
        return NormSolution(UNSOLVED)
    if factoring is None:
        factoring = factorize(inst.n, seed=seed)
    if not factoring.factored:
        return NormSolution(TIMED_OUT, factoring=factoring)
    if factoring.product() != abs(inst.n):
        raise ValueError("factorisation does not match n")
    # √2^ℓ ξ is the numerator of the canonical form
    xi_int = xi.value
    facs, _ = factor_zroot2(xi_int, factoring.factors, seed)
    s = decompose_assoc(xi_int, facs, seed)
    if s == UNSOLVABLE:
        return NormSolution(UNSOLVED, factoring=factoring)
    t0 = DOmega(s * DELTA_INV_NUM**inst.ell, inst.ell)
    return NormSolution(SOLVED, fix_unit(t0, xi), factoring)
