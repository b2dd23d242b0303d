"""Approximate synthesis of z-rotations over Clifford+T.

Three entry points:

* :func:`synthesize` approximates Rz(θ) by U = [[u, -t†], [t, u†]].
* :func:`synthesize_phase8` approximates Rz(θ) by e^{iπ/8}·U with
  U = [[u, -t†ω⁻¹], [t, u†ω⁻¹]].
* :func:`synthesize_up_to_phase` runs both, interleaved by T-count, and
  keeps whichever finishes first.

Each walks the candidates u of a scaled grid problem in order of increasing
denominator exponent k, solves t†t = 1 - u†u where factoring allows, and
exactly synthesises the first unitary found. Candidates whose norm equation
could not be decided are recorded, which yields a certified lower bound on
the T-count.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

import mpmath
from mpmath import iv

from .diophantine import (
    SOLVED,
    TIMED_OUT,
    FactoringProvider,
    NormEquationInstance,
    capped_provider,
    solve_norm_equation,
)
from .exact import Circuit, Mat2, exact_synthesize, target_matrix
from .grid2d import ScaledProblem
from .numeric import RealInterval, fraction_interval, iv_eval, working_precision
from .regions import Angle, Disk, EpsilonRegion, parse_epsilon
from .rings import DOmega, DRoot2, ZOmega, ZRoot2

PLAIN, PHASE8, CLIFFORD = "plain", "phase8", "clifford"

DELTA_NORM_SQ = ZRoot2(2, 1)  # |δ|² = 2 + √2
DELTA_BULLET_NORM_SQ = ZRoot2(2, -1)  # |δ•|² = 2 - √2


class InvariantViolation(AssertionError):
    """An internal consistency check failed; the result must not be trusted."""


@dataclass
class SynthesisOptions:
    effort: Optional[int] = 25  # Pollard rho rounds per candidate; None = unlimited
    seed: int = 0
    provider: Optional[FactoringProvider] = None  # overrides effort/seed
    max_candidates: Optional[int] = None

    def factoring(self) -> FactoringProvider:
        return self.provider or capped_provider(self.effort, self.seed)


@dataclass(frozen=True)
class CandidateRecord:
    branch: str
    k: int
    n: int
    status: str  # SOLVED, UNSOLVED or TIMED_OUT
    factored: bool
    nominal_tcount: int


@dataclass
class SynthesisResult:
    theta: Angle
    eps: Fraction
    mode: str  # requested mode: plain, phase8 or up-to-phase
    branch: str  # which construction produced the circuit
    u: DOmega
    t: DOmega
    k: int
    circuit: Circuit
    error_bound: mpmath.mpf
    lower_bound: int
    candidates: list[CandidateRecord] = field(default_factory=list)

    @property
    def tcount(self) -> int:
        return self.circuit.tcount

    @property
    def phase8(self) -> bool:
        return self.branch == PHASE8

    def matrix(self) -> Mat2:
        return target_matrix(self.u, self.t, self.phase8)

    def verify(self) -> bool:
        """Re-check exact unitarity, circuit equality and the error bound."""
        if self.u.norm_sqrt2() + self.t.norm_sqrt2() != DRoot2.coerce(1):
            return False
        if self.circuit.matrix() != self.matrix():
            return False
        prec = 2 * working_precision(self.eps) + 2 * self.u.k + 64
        err = certified_error(self.theta, self.u, self.phase8, prec)
        return err <= self.eps and _mpf_fraction(self.error_bound) <= self.eps


# ---------------------------------------------------------------------------
# error certification


def _mpf_fraction(x: mpmath.mpf) -> Fraction:
    sign, man, exp, _ = x._mpf_
    v = Fraction(int(man)) * (Fraction(2) ** exp)
    return -v if sign else v


def operator_error(theta, u: DOmega, radius_sq=1, prec: int = 0) -> RealInterval:
    """Enclosure of √(2 - 2·Re(z†u)/ρ), z = e^{-iθ/2}, ρ = √radius_sq.

    For ρ = 1 this is ‖Rz(θ) - U‖ for the unitary [[u, -t†], [t, u†]]; for
    ρ = |δ| and u = δ·u₀ it is ‖Rz(θ) - e^{iπ/8}U₀‖ in the phase variant.
    """
    region = EpsilonRegion(theta, 1, radius_sq)
    prec = prec or 2 * max(64, _bits_needed(u)) + 64
    dot = region.dot_interval(u, prec)
    rho = region._rho(prec)
    # lower and upper bounds of dot/ρ
    if dot.lo >= 0:
        q_lo = mpmath.fdiv(dot.lo, rho.hi, prec=prec, rounding="f")
        q_hi = mpmath.fdiv(dot.hi, rho.lo, prec=prec, rounding="c")
    else:
        q_lo = mpmath.fdiv(dot.lo, rho.lo, prec=prec, rounding="f")
        q_hi = mpmath.fdiv(dot.hi, rho.hi if dot.hi < 0 else rho.lo, prec=prec, rounding="c")
    lo2 = mpmath.fsub(2, mpmath.fmul(2, q_hi, exact=True), exact=True)
    hi2 = mpmath.fsub(2, mpmath.fmul(2, q_lo, exact=True), exact=True)
    return RealInterval(max(lo2, mpmath.mpf(0)), max(hi2, mpmath.mpf(0))).sqrt(prec)


def _bits_needed(u: DOmega) -> int:
    return 2 * u.k + 16


def certified_error(theta, u: DOmega, phase8: bool = False, prec: int = 0) -> Fraction:
    """Exact rational upper bound on the approximation error of the unitary with first entry u."""
    if phase8:
        return _mpf_fraction(operator_error(theta, u * DOmega(ZOmega(0, 0, 1, 1)), DELTA_NORM_SQ, prec).hi)
    return _mpf_fraction(operator_error(theta, u, 1, prec).hi)


def _error_within(theta, u: DOmega, eps: Fraction, phase8: bool) -> mpmath.mpf:
    """Upper bound on the error, refined until it is ≤ ε."""
    prec = 2 * working_precision(eps) + 2 * u.k + 64
    for _ in range(4):
        if phase8:
            bound = operator_error(theta, u * DOmega(ZOmega(0, 0, 1, 1)), DELTA_NORM_SQ, prec).hi
        else:
            bound = operator_error(theta, u, 1, prec).hi
        if _mpf_fraction(bound) <= eps:
            return bound
        prec *= 2
    raise InvariantViolation(f"certified error {bound} exceeds ε = {float(eps)}")


# ---------------------------------------------------------------------------
# Clifford fallback


def clifford_threshold_exceeded(eps) -> bool:
    """ε ≥ |1 - e^{iπ/8}| = 2 sin(π/16), decided with certified enclosures."""
    eps = parse_epsilon(eps)
    prec = 64
    while True:
        c = iv_eval(lambda: 2 * iv.sin(iv.pi / 16), prec)
        cmp = fraction_interval(eps, prec + 8).compare(c)
        if cmp is not None:
            return cmp > 0
        prec *= 2


def _nearest_quarter_turns(theta: Angle) -> int:
    """The integer j closest to 2θ/π (halves round up)."""
    if theta.pi_multiple is not None:
        return math.floor(2 * theta.pi_multiple + Fraction(1, 2))
    prec = 64
    while True:
        x = iv_eval(lambda: 2 * theta._iv() / iv.pi + iv.mpf(0.5), prec)
        lo, hi = mpmath.floor(x.lo), mpmath.floor(x.hi)
        if lo == hi:
            return int(lo)
        prec *= 2


def clifford_fallback(theta, eps, mode: str = PLAIN) -> Optional[SynthesisResult]:
    """T-count 0 solution u = ω^(-j), t = 0 when ε ≥ |1 - e^{iπ/8}|, else None."""
    theta = Angle.parse(theta)
    eps = parse_epsilon(eps)
    if not clifford_threshold_exceeded(eps):
        return None
    j = _nearest_quarter_turns(theta)
    u = DOmega(ZOmega(0, 0, 0, 1)).mul_omega(-j % 8)
    t = DOmega(0)
    circuit = exact_synthesize(u, t)
    err = _error_within(theta, u, eps, False)
    return SynthesisResult(theta, eps, mode, CLIFFORD, u, t, 0, circuit, err, 0, [])


# ---------------------------------------------------------------------------
# candidate streams


def _nominal(branch: str, k: int) -> int:
    if branch == PLAIN:
        return max(0, 2 * k - 2)
    return 2 * k - 1 if k > 0 else 1


class _Branch:
    """Candidates and their Diophantine outcomes for one phase."""

    def __init__(self, branch: str, theta: Angle, eps: Fraction):
        self.branch, self.theta, self.eps = branch, theta, eps
        if branch == PLAIN:
            A, B = EpsilonRegion(theta, eps), Disk(1)
        else:
            A, B = EpsilonRegion(theta, eps, DELTA_NORM_SQ), Disk(DELTA_BULLET_NORM_SQ)
        self.problem = ScaledProblem.build(A, B)

    def stream(self) -> Iterator[tuple[int, int, DOmega]]:
        """(nominal T-count, k, candidate) in increasing k."""
        for v, k in self.problem.stream():
            yield _nominal(self.branch, k), k, v

    def unscaled(self, v: DOmega) -> DOmega:
        return v if self.branch == PLAIN else v.div_delta()


def _check_candidate(n: int, k: int, branch: str) -> None:
    if n < 0 or n % 8 not in (0, 1):
        raise InvariantViolation(f"{branch} candidate at k={k} has n={n}, expected n ≥ 0 and n ≡ 0, 1 (mod 8)")
    if branch == PLAIN and n > 4**k:
        raise InvariantViolation(f"candidate at k={k} has n={n} > 4^k")


def _attempt(br: _Branch, k: int, v: DOmega, provider: FactoringProvider, seed: int):
    u = br.unscaled(v)
    xi = DRoot2.coerce(1) - u.norm_sqrt2()
    inst = NormEquationInstance.from_xi(xi)
    _check_candidate(inst.n, k, br.branch)
    if inst.n == 0:  # ξ = 0
        sol_status, t, factored = SOLVED, DOmega(0), True
    else:
        outcome = provider(inst.n)
        sol = solve_norm_equation(inst, outcome, seed)
        sol_status, t, factored = sol.status, sol.t, outcome.factored
    rec = CandidateRecord(br.branch, k, inst.n, sol_status, factored, _nominal(br.branch, k))
    return rec, u, t


def _finish(br: _Branch, mode: str, k: int, u: DOmega, t: DOmega, records) -> SynthesisResult:
    phase8 = br.branch == PHASE8
    first = exact_synthesize(u, t, phase8)
    t2 = t.mul_omega(1)
    second = exact_synthesize(u, t2, phase8)
    circuit, t_out = (first, t) if first.tcount <= second.tcount else (second, t2)
    expected = _nominal(br.branch, k)
    if circuit.tcount != expected:
        raise InvariantViolation(
            f"{br.branch} solution at k={k} has T-count {circuit.tcount}, expected {expected}"
        )
    err = _error_within(br.theta, u, br.eps, phase8)
    return SynthesisResult(
        br.theta, br.eps, mode, br.branch, u, t_out, k, circuit, err, lower_bound_report(records), list(records)
    )


def lower_bound_report(records: list[CandidateRecord]) -> int:
    """Nominal T-count of the first candidate that was solved or timed out.

    Every earlier candidate was proven unsolvable, so no circuit with a
    smaller T-count exists for the phases searched.
    """
    for r in records:
        if r.status in (SOLVED, TIMED_OUT):
            return r.nominal_tcount
    raise ValueError("no candidate reached a conclusive or timed-out outcome")


def _tagged(i: int, br: _Branch):
    for nom, k, v in br.stream():
        yield nom, i, k, v


def _run(branches: list[_Branch], mode: str, options: SynthesisOptions) -> SynthesisResult:
    provider = options.factoring()
    streams = [_tagged(i, br) for i, br in enumerate(branches)]
    records: list[CandidateRecord] = []
    for nom, i, k, v in heapq.merge(*streams, key=lambda x: (x[0], x[1])):
        br = branches[i]
        rec, u, t = _attempt(br, k, v, provider, options.seed)
        records.append(rec)
        if rec.status == SOLVED:
            return _finish(br, mode, k, u, t, records)
        if options.max_candidates is not None and len(records) >= options.max_candidates:
            raise RuntimeError(f"no solution within {options.max_candidates} candidates")
    raise AssertionError("candidate stream ended")  # streams are infinite


# ---------------------------------------------------------------------------
# entry points


def _prepare(theta, eps, options):
    return Angle.parse(theta), parse_epsilon(eps), options or SynthesisOptions()


def synthesize(theta, eps, options: Optional[SynthesisOptions] = None) -> SynthesisResult:
    """Approximate Rz(θ) within ε by a Clifford+T circuit (no global phase freedom)."""
    theta, eps, options = _prepare(theta, eps, options)
    fb = clifford_fallback(theta, eps, PLAIN)
    if fb is not None:
        return fb
    return _run([_Branch(PLAIN, theta, eps)], PLAIN, options)


def synthesize_phase8(theta, eps, options: Optional[SynthesisOptions] = None) -> SynthesisResult:
    """Approximate Rz(θ) within ε by e^{iπ/8} times a Clifford+T circuit."""
    theta, eps, options = _prepare(theta, eps, options)
    if clifford_threshold_exceeded(eps):
        raise ValueError("phase variant requires ε < |1 - e^{iπ/8}|")
    return _run([_Branch(PHASE8, theta, eps)], PHASE8, options)


def synthesize_up_to_phase(theta, eps, options: Optional[SynthesisOptions] = None) -> SynthesisResult:
    """Approximate Rz(θ) within ε up to a global phase, searching both phase classes."""
    theta, eps, options = _prepare(theta, eps, options)
    fb = clifford_fallback(theta, eps, "up-to-phase")
    if fb is not None:
        return fb
    branches = [_Branch(PLAIN, theta, eps), _Branch(PHASE8, theta, eps)]
    return _run(branches, "up-to-phase", options)


def global_phase_error(result: SynthesisResult, prec: int = 0) -> Fraction:
    """Certified bound on ‖Rz(θ) - λ·circuit‖ with λ = 1 or e^{iπ/8} as appropriate."""
    return certified_error(result.theta, result.u, result.phase8, prec)


__all__ = [
    "CLIFFORD",
    "PHASE8",
    "PLAIN",
    "CandidateRecord",
    "InvariantViolation",
    "SynthesisOptions",
    "SynthesisResult",
    "certified_error",
    "clifford_fallback",
    "clifford_threshold_exceeded",
    "lower_bound_report",
    "operator_error",
    "synthesize",
    "synthesize_phase8",
    "synthesize_up_to_phase",
]
