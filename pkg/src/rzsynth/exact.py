"""Exact Clifford+T synthesis of unitaries with entries in D[ω].

A circuit is a word over H, T, S, X together with a global phase ω^k
(written ``W`` in words). Words are read left to right as a matrix
product, so ``"HT"`` is the matrix H·T.

The reduction peels T^m·H syllables off the left while the smallest
denominator exponent of |u|² drops. Once that exponent is below 4 the
remaining unitary is looked up among short normal forms
``[T](HT|SHT)*·C`` with C a Clifford.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .rings import DOmega, DRoot2, ZOmega

_ZERO = DOmega(0)
_ONE = DOmega(1)
_INV_R2 = DOmega(ZOmega(0, 0, 0, 1), 1)
_OMEGA = DOmega(ZOmega(0, 0, 1, 0))
_I = DOmega(ZOmega(0, 1, 0, 0))


class Mat2:
    """2×2 matrix over D[ω], entries (a, b; c, d)."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        self.a, self.b, self.c, self.d = (DOmega.coerce(x) for x in (a, b, c, d))

    def __matmul__(self, o: Mat2) -> Mat2:
        return Mat2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def dagger(self) -> Mat2:
        return Mat2(self.a.dagger(), self.c.dagger(), self.b.dagger(), self.d.dagger())

    def scale(self, s: DOmega) -> Mat2:
        return Mat2(self.a * s, self.b * s, self.c * s, self.d * s)

    def entries(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def key(self) -> tuple:
        return self.entries()

    def __eq__(self, other) -> bool:
        return isinstance(other, Mat2) and self.entries() == other.entries()

    def __hash__(self) -> int:
        return hash(self.entries())

    def __repr__(self) -> str:
        return f"Mat2({self.a}, {self.b}, {self.c}, {self.d})"

    def is_unitary(self) -> bool:
        return self @ self.dagger() == IDENTITY


IDENTITY = Mat2(1, 0, 0, 1)
GATES = {
    "H": Mat2(_INV_R2, _INV_R2, _INV_R2, -_INV_R2),
    "T": Mat2(1, 0, 0, _OMEGA),
    "S": Mat2(1, 0, 0, _I),
    "X": Mat2(0, 1, 1, 0),
    "W": Mat2(_OMEGA, 0, 0, _OMEGA),
}
_T_INV = Mat2(1, 0, 0, _OMEGA.mul_omega(6))
_T_POWER_WORDS = ("", "T", "S", "TS")


def word_matrix(word: Iterable[str]) -> Mat2:
    m = IDENTITY
    for g in word:
        m = m @ GATES[g]
    return m


@dataclass(frozen=True)
class Circuit:
    """Gate word over H, T, S, X times the global phase ω^phase."""

    gates: str = ""
    phase: int = 0

    @staticmethod
    def from_word(word: str) -> Circuit:
        gates = "".join(g for g in word if g != "W")
        return Circuit(gates, word.count("W") % 8)

    @staticmethod
    def parse(text: str) -> Circuit:
        m = re.fullmatch(r"\s*([HTSX]*)(?:W(\d+))?\s*", text)
        if not m:
            raise ValueError(f"malformed circuit {text!r}")
        return Circuit(m.group(1), int(m.group(2) or 0) % 8)

    @property
    def tcount(self) -> int:
        return self.gates.count("T")

    def matrix(self) -> Mat2:
        m = word_matrix(self.gates)
        return m.scale(_OMEGA.mul_omega(self.phase - 1)) if self.phase else m

    def __str__(self) -> str:
        return self.gates + (f"W{self.phase}" if self.phase else "")

    def __add__(self, other: Circuit) -> Circuit:
        return Circuit(self.gates + other.gates, (self.phase + other.phase) % 8)


# ---------------------------------------------------------------------------
# Clifford group and short normal forms


@lru_cache(maxsize=1)
def clifford_table() -> dict[Mat2, Circuit]:
    """All 192 Cliffords (with phases ω^k) mapped to a shortest word."""
    table = {IDENTITY: Circuit()}
    frontier = [(IDENTITY, "")]
    while frontier:
        nxt = []
        for m, w in frontier:
            for g in "HSXW":
                m2 = m @ GATES[g]
                if m2 not in table:
                    c = Circuit.from_word(w + g)
                    table[m2] = c
                    nxt.append((m2, w + g))
        frontier = nxt
    return table


@lru_cache(maxsize=1)
def _normal_prefixes(max_t: int = 8) -> list[tuple[Circuit, Mat2]]:
    """Words [T](HT|SHT)^* up to max_t T gates, sorted by T-count, as (word, inverse)."""
    out = []
    bodies = [""]
    for _ in range(max_t + 1):
        for body in bodies:
            for head in ("", "T"):
                w = head + body
                if w.count("T") <= max_t:
                    out.append(w)
        bodies = [s + b for b in bodies for s in ("HT", "SHT")]
    out = sorted(set(out), key=lambda w: (w.count("T"), len(w), w))
    return [(Circuit(w), word_matrix(w).dagger()) for w in out]


def _lookup_small(U: Mat2) -> Circuit:
    cliffords = clifford_table()
    for c, inv in _normal_prefixes():
        rest = inv @ U
        hit = cliffords.get(rest)
        if hit is not None:
            return c + hit
    raise ArithmeticError("residual unitary not found among short normal forms")


def sde_abs2(u: DOmega) -> int:
    """Smallest denominator exponent of |u|² in D[√2]."""
    return DRoot2.coerce(u.norm_sqrt2()).k


def _reduce(U: Mat2) -> Circuit:
    # U = T^m·H·V with V = H·T^-m·U. Only the first column is tracked; the
    # second follows from unitarity and det V = det U / ∏(-ω^m).
    u, t = U.a, U.c
    det_exp = _omega_exponent(U.a * U.d - U.b * U.c)
    gates = []
    s = sde_abs2(u)
    while s >= 4:
        for m in range(4):
            tm = t.mul_omega(-m % 8)
            u2 = (u + tm) * _INV_R2
            s2 = sde_abs2(u2)
            if s2 < s:
                break
        else:
            raise ArithmeticError(f"no reducing syllable at sde {s}")
        gates.append(_T_POWER_WORDS[m] + "H")
        u, t, s = u2, (u - tm) * _INV_R2, s2
        det_exp = (det_exp - m - 4) % 8  # det(T^m H) = -ω^m = ω^(m+4)
    d = _OMEGA.mul_omega(det_exp - 1) if det_exp else _ONE
    V = Mat2(u, -(t.dagger() * d), t, u.dagger() * d)
    return Circuit("".join(gates)) + _lookup_small(V)


def _omega_exponent(x: DOmega) -> int:
    for j in range(8):
        if x == (_OMEGA.mul_omega(j - 1) if j else _ONE):
            return j
    raise ValueError("determinant is not a power of ω")


def exact_synthesize_matrix(U: Mat2) -> Circuit:
    """A Clifford+T circuit whose matrix is exactly U."""
    if not U.is_unitary():
        raise ValueError("matrix is not unitary")
    c = _reduce(U)
    if c.matrix() != U:
        raise ArithmeticError("exact synthesis produced a wrong circuit")
    return c


def target_matrix(u: DOmega, t: DOmega, phase8: bool = False) -> Mat2:
    """[[u, -t†], [t, u†]], or with the right column times ω⁻¹ if phase8."""
    if phase8:
        return Mat2(u, (-t.dagger()).mul_omega(7), t, u.dagger().mul_omega(7))
    return Mat2(u, -t.dagger(), t, u.dagger())


def check_unit_column(u: DOmega, t: DOmega) -> None:
    s = u.norm_sqrt2() + t.norm_sqrt2()
    if s != DRoot2.coerce(1):
        raise ValueError(f"u†u + t†t = {s}, not 1")


def exact_synthesize(u: DOmega, t: DOmega, phase8: bool = False) -> Circuit:
    """Circuit for the unitary with first column (u, t); see :func:`target_matrix`."""
    check_unit_column(u, t)
    return exact_synthesize_matrix(target_matrix(u, t, phase8))
