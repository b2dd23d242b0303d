"""Constants driving skew reduction, and the inequalities they must satisfy.

``P`` is the skew threshold below which a pair of ellipses counts as upright
enough, ``Q`` the guaranteed per-step contraction of the skew. ``r``, ``a``,
``b`` delimit the regions of the (z, ζ) plane in which each elementary grid
operator is applied:

* R      when |z|, |ζ| ≤ r
* K      when z ≤ -a and ζ ≥ r        (and its bullet image symmetrically)
* A^n    when z, ζ ≥ -a               (b ≥ 0)
* B^n    when z, ζ ≥ -b               (b ≤ 0)

None of these values is canonical; they were picked by the grid search in
:func:`feasibility_search` (run ``scripts/search_constants.py``) and must pass
:func:`check_constants`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

LAMBDA = 1 + math.sqrt(2)
LN_LAMBDA = math.log(LAMBDA)


def sinh_l(x: float) -> float:
    return (LAMBDA**x - LAMBDA**-x) / 2


def cosh_l(x: float) -> float:
    return (LAMBDA**x + LAMBDA**-x) / 2


@dataclass(frozen=True)
class StepConstants:
    P: float = 15.0
    Q: float = 0.9
    r: float = 0.8
    a: float = -0.3
    b: float = 0.2

    @property
    def upright_target(self) -> float:
        """Uprightness guaranteed once skew ≤ P."""
        return math.pi / (4 * math.sqrt(self.P + 1))


DEFAULT = StepConstants()


def inequalities(c: StepConstants) -> dict[str, float]:
    """Slack of each constraint; every value must be ≥ 0."""
    P, Q, r, a, b = c.P, c.Q, c.r, c.a, c.b
    sq2 = math.sqrt(2)
    lam = LAMBDA

    def k1(x: float) -> float:
        return (sq2 - cosh_l(x)) ** 2

    k_lemma = max(k1(r - 1), k1(1 - a), k1(0)) + max(cosh_l(r - 1) ** 2, cosh_l(1 - a) ** 2) * 2 / P
    M = c.upright_target
    return {
        "R: (1+2/P) sinh(r)^2 <= Q": Q - (1 + 2 / P) * sinh_l(r) ** 2,
        "K: bound <= Q": Q - k_lemma,
        "K: r-1 <= 0 <= 1-a": min(0 - (r - 1), (1 - a) - 0),
        "A: (1/(2λ)-1)^2 + 2/P <= Q": Q - ((1 / (2 * lam) - 1) ** 2 + 2 / P),
        "A: ln(1/2)/ln λ <= a": a - math.log(0.5) / LN_LAMBDA,
        "A: (1-2λ^a)^2 < (1-1/λ)^2": (1 - 1 / lam) ** 2 - (1 - 2 * lam**a) ** 2,
        "A: max(...) + 8λ^(2a)/P <= Q": Q - (max((2 * lam**a - 1) ** 2, (1 / lam - 1) ** 2) + 8 * lam ** (2 * a) / P),
        "B: (1-1/(2λ))^2 + 2/P <= Q": Q - ((1 - 1 / (2 * lam)) ** 2 + 2 / P),
        "B: (1-1/λ)^2 <= (1-√2λ^b)^2": (1 - sq2 * lam**b) ** 2 - (1 - 1 / lam) ** 2,
        "B: max(...) + 4λ^(2b)/P <= Q": Q - (max((1 - 1 / lam) ** 2, (1 - sq2 * lam**b) ** 2) + 4 * lam ** (2 * b) / P),
        "cover: -r <= a": a + r,
        "cover: -b <= r-1": (r - 1) + b,
        "upright: P <= π²/(16M²) - 1": math.pi**2 / (16 * M**2) - 1 - P,
        "Q < 1": 1 - Q,
    }


def check_constants(c: StepConstants = DEFAULT, tol: float = 1e-9) -> list[str]:
    """Names of violated constraints (empty if all hold to within tol)."""
    return [name for name, slack in inequalities(c).items() if slack < -tol]


def feasibility_search(P: float = 15.0, Q: float = 0.9, step: float = 0.05) -> list[StepConstants]:
    """All grid points (r, a, b) satisfying every constraint for given P, Q."""
    out = []
    n = int(round(2 / step))
    for i in range(1, n + 1):
        r = round(i * step, 10)
        for j in range(-n, n + 1):
            a = round(j * step, 10)
            for m in range(-n, n + 1):
                b = round(m * step, 10)
                cand = StepConstants(P, Q, r, a, b)
                if not check_constants(cand, tol=0.0):
                    out.append(cand)
    return out
