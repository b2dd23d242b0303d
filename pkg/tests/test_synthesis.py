from __future__ import annotations

import math
import random
from fractions import Fraction

import mpmath
import pytest

from rzsynth.diophantine import SOLVED, TIMED_OUT, UNSOLVED
from rzsynth.exact import Circuit, target_matrix
from rzsynth.regions import Angle, EpsilonRegion
from rzsynth.rings import DOmega, DRoot2, ZOmega, ZRoot2
from rzsynth.synthesis import (
    CLIFFORD,
    PHASE8,
    PLAIN,
    CandidateRecord,
    InvariantViolation,
    SynthesisOptions,
    _check_candidate,
    certified_error,
    clifford_fallback,
    clifford_threshold_exceeded,
    global_phase_error,
    lower_bound_report,
    operator_error,
    synthesize,
    synthesize_phase8,
    synthesize_up_to_phase,
)

from oracles import spectral_error
from reference import PI128_CIRCUIT, PI128_T, PI128_U

OMEGA = DOmega(ZOmega(0, 0, 1, 0))
DELTA = DOmega(ZOmega(0, 0, 1, 1))
ONE = DRoot2.coerce(1)


def check_result(res, eps):
    assert res.u.norm_sqrt2() + res.t.norm_sqrt2() == ONE
    assert res.circuit.matrix() == res.matrix()
    assert certified_error(res.theta, res.u, res.phase8, 600) <= Fraction(eps)
    assert spectral_error(res.theta, res.matrix(), res.phase8) <= mpmath.mpf(Fraction(eps).numerator) / Fraction(eps).denominator
    assert res.verify()
    for rec in res.candidates:
        assert rec.n >= 0 and rec.n % 8 in (0, 1)
        if rec.branch == PLAIN:
            assert rec.n <= 4**rec.k
    ks = [(r.nominal_tcount) for r in res.candidates]
    assert ks == sorted(ks)
    assert res.lower_bound <= res.tcount


# ---------------------------------------------------------------------------
# error bounds


def test_operator_error_identity():
    e = operator_error(0, DOmega(1))
    assert e.lo == 0 and e.hi < mpmath.mpf(2) ** -60


def test_operator_error_boundary_identity():
    # u = ω lies on the boundary of the ε-region for θ = 0 with ε² = 2 - √2
    e = operator_error(0, OMEGA, prec=200)
    with mpmath.workprec(300):
        want = mpmath.sqrt(2 - mpmath.sqrt(2))
    assert e.lo <= want <= e.hi
    assert e.width() < mpmath.mpf(10) ** -50


def test_operator_error_published_u():
    e = operator_error("pi/128", PI128_U, prec=400)
    oracle = spectral_error("pi/128", target_matrix(PI128_U, PI128_T))
    assert e.lo <= oracle <= e.hi
    assert float(e.hi) == pytest.approx(0.958967e-10, rel=1e-5)


def test_certified_error_is_rational_upper_bound():
    q = certified_error("pi/128", PI128_U, prec=400)
    assert isinstance(q, Fraction)
    assert Fraction(95896, 10**15) < q < Fraction(95897, 10**15)


# ---------------------------------------------------------------------------
# Clifford fallback


def test_threshold():
    assert clifford_threshold_exceeded(Fraction(1, 2))
    assert not clifford_threshold_exceeded(Fraction(1, 10**10))
    assert clifford_threshold_exceeded("0.3902")
    assert not clifford_threshold_exceeded("0.3901")


def test_fallback_examples():
    res = clifford_fallback(0, "0.5")
    assert res.branch == CLIFFORD and res.tcount == 0 and str(res.circuit) == ""
    res = clifford_fallback("pi/4", "0.5")
    assert res.u == DOmega(1).mul_omega(7) and res.tcount == 0
    assert res.verify()
    assert clifford_fallback("pi/128", Fraction(1, 10**10)) is None


def test_fallback_random_angles():
    rng = random.Random(0)
    for _ in range(30):
        theta = Fraction(rng.randint(-7000, 7000), 1000)
        res = synthesize(theta, Fraction(2, 5))
        assert res.tcount == 0
        check_result(res, Fraction(2, 5))


# ---------------------------------------------------------------------------
# plain synthesis


def test_pi_over_128_at_1e10():
    res = synthesize("pi/128", Fraction(1, 10**10))
    assert res.tcount == 102 and res.lower_bound == 102
    assert res.u == PI128_U and res.k == 52
    check_result(res, Fraction(1, 10**10))
    # t is determined up to a phase ω^j
    assert any(res.t == PI128_T.mul_omega(j) for j in range(8))


@pytest.mark.parametrize("theta", ["1/3", "-2.5", "pi/7", "0.001", "3*pi/5"])
def test_assorted_targets_moderate_precision(theta):
    eps = Fraction(1, 10**8)
    res = synthesize(theta, eps)
    check_result(res, eps)
    assert res.tcount % 2 == 0
    assert res.tcount == max(0, 2 * res.k - 2)
    assert res.tcount <= 10 + 4 * math.log2(1 / eps)


def test_determinism():
    a = synthesize("0.7", Fraction(1, 10**12), SynthesisOptions(seed=3))
    b = synthesize("0.7", Fraction(1, 10**12), SynthesisOptions(seed=3))
    assert (a.u, a.t, str(a.circuit), a.candidates) == (b.u, b.t, str(b.circuit), b.candidates)


def test_max_candidates():
    with pytest.raises(RuntimeError):
        synthesize("pi/128", Fraction(1, 10**10), SynthesisOptions(max_candidates=1))


# ---------------------------------------------------------------------------
# phase variant and up-to-phase


def test_phase8_basic():
    eps = Fraction(1, 10**10)
    res = synthesize_phase8("pi/128", eps)
    assert res.branch == PHASE8 and res.tcount % 2 == 1
    check_result(res, eps)
    # u′ = δ·u has denominator exponent k and T-count 2k - 1
    assert (res.u * DELTA).k == res.k
    assert res.tcount == 2 * res.k - 1
    assert global_phase_error(res, 600) <= eps


def test_phase8_rejects_large_eps():
    with pytest.raises(ValueError):
        synthesize_phase8(0, "0.5")


def test_phase8_region_scaling():
    # δ = |δ|·e^{iπ/8}, so δu ∈ |δ|·R_ε(θ) exactly when u ∈ R_ε(θ + π/4)
    eps = Fraction(1, 10**10)
    A = EpsilonRegion("pi/128", eps, ZRoot2(2, 1))
    shifted = EpsilonRegion("33pi/128", eps)
    res = synthesize_phase8("pi/128", eps)
    for u in (res.u, PI128_U, res.u.mul_omega(1)):
        assert A.contains(u * DELTA) == shifted.contains(u)
    assert A.contains(res.u * DELTA)


@pytest.mark.parametrize("theta", ["pi/128", "1/3", "-1.2"])
def test_up_to_phase_is_minimum(theta):
    eps = Fraction(1, 10**10)
    plain = synthesize(theta, eps)
    ph = synthesize_phase8(theta, eps)
    best = synthesize_up_to_phase(theta, eps)
    assert best.tcount == min(plain.tcount, ph.tcount)
    assert plain.tcount != ph.tcount
    check_result(best, eps)
    if theta == "pi/128":
        assert best.tcount <= 102


# ---------------------------------------------------------------------------
# bookkeeping


def _rec(status, nominal, branch=PLAIN):
    return CandidateRecord(branch, (nominal + 2) // 2, 1, status, status != TIMED_OUT, nominal)


def test_lower_bound_report():
    assert lower_bound_report([_rec(SOLVED, 40)]) == 40
    assert lower_bound_report([_rec(UNSOLVED, 38), _rec(UNSOLVED, 40), _rec(TIMED_OUT, 40), _rec(SOLVED, 42)]) == 40
    with pytest.raises(ValueError):
        lower_bound_report([_rec(UNSOLVED, 10)])


def test_candidate_invariants():
    _check_candidate(0, 0, PLAIN)
    _check_candidate(17, 3, PLAIN)
    with pytest.raises(InvariantViolation):
        _check_candidate(3, 5, PLAIN)
    with pytest.raises(InvariantViolation):
        _check_candidate(-7, 5, PHASE8)
    with pytest.raises(InvariantViolation):
        _check_candidate(4**3 + 1, 3, PLAIN)
    _check_candidate(4**3 + 1, 3, PHASE8)


def test_angle_parsing():
    assert Angle.parse("pi/128") == Angle(pi_multiple=Fraction(1, 128))
    assert Angle.parse("-3pi/4") == Angle(pi_multiple=Fraction(-3, 4))
    assert Angle.parse("0.25") == Angle(value=Fraction(1, 4))
    for text in ("pi/128", "-3*pi/4", "0.125", "7"):
        a = Angle.parse(text)
        assert Angle.parse(a.render()) == a
    with pytest.raises(ValueError):
        Angle.parse("pi/0")
    with pytest.raises(ValueError):
        Angle.parse("banana")


def test_circuit_render_format():
    c = Circuit.parse(PI128_CIRCUIT)
    assert str(c).endswith("HTHW7")
