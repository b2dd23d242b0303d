"""Two-dimensional grid problems: find u ∈ Z[ω] with u ∈ A and u• ∈ B.

The pipeline for bounded convex A, B:

1. enclose A and B in ellipses;
2. find a special grid operator G making G(A), G•(B) close to upright by
   repeatedly applying :func:`step_operator` to the pair of ellipse forms;
3. scan the bounding boxes of the transformed ellipses column by column with
   one-dimensional grid solves;
4. map candidates back through G⁻¹ and keep those passing the exact
   membership tests of A and B.

For the scaled problem (u ∈ √2^k A, u• ∈ (-√2)^k B) the operator is computed
once and reused for every k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

import mpmath

from .constants import DEFAULT, StepConstants
from .grid1d import enumerate_grid_1d
from .rings import DOmega, QRoot2, ZOmega, ZRoot2, lambda_power

# ---------------------------------------------------------------------------
# ellipses


@dataclass(frozen=True)
class Ellipse:
    """{v : (v - p)ᵀ D (v - p) ≤ 1}; D = (d11, d12, d22)."""

    D: tuple
    p: tuple = (mpmath.mpf(0), mpmath.mpf(0))

    def det(self) -> mpmath.mpf:
        d11, d12, d22 = self.D
        return d11 * d22 - d12 * d12

    def contains(self, x, y) -> bool:
        d11, d12, d22 = self.D
        dx, dy = x - self.p[0], y - self.p[1]
        return d11 * dx * dx + 2 * d12 * dx * dy + d22 * dy * dy <= 1

    def scaled(self, s) -> Ellipse:
        """Image under v ↦ s·v for a real scalar s."""
        d11, d12, d22 = self.D
        s2 = s * s
        return Ellipse((d11 / s2, d12 / s2, d22 / s2), (self.p[0] * s, self.p[1] * s))

    def area(self) -> mpmath.mpf:
        return mpmath.pi / mpmath.sqrt(self.det())


def uprightness(E: Ellipse) -> mpmath.mpf:
    d11, _, d22 = E.D
    return mpmath.pi / 4 * mpmath.sqrt(E.det() / (d11 * d22))


def _pad(x, scale) -> mpmath.mpf:
    return abs(x) * mpmath.mpf(2) ** (-mpmath.mp.prec + 24) + scale * mpmath.mpf(2) ** (-mpmath.mp.prec + 24)


def bbox(E: Ellipse) -> tuple[tuple, tuple]:
    """Axis-aligned bounding box ((x0, x1), (y0, y1)), padded outward."""
    det = E.det()
    d11, _, d22 = E.D
    hx = mpmath.sqrt(d22 / det)
    hy = mpmath.sqrt(d11 / det)
    px, py = E.p
    ex = _pad(px, hx)
    ey = _pad(py, hy)
    return ((px - hx - ex, px + hx + ex), (py - hy - ey, py + hy + ey))


def chord_y(E: Ellipse, x) -> Optional[tuple]:
    """y-interval of E ∩ {x = const}, padded outward, or None."""
    d11, d12, d22 = E.D
    dx = x - E.p[0]
    disc = d22 - E.det() * dx * dx
    hy = mpmath.sqrt(d11 / E.det())
    slack = _pad(dx, hy) * (d11 + d22 + 1)
    if disc < -slack * d22:
        return None
    root = mpmath.sqrt(max(disc, 0) + slack * d22)
    mid = E.p[1] - d12 * dx / d22
    half = root / d22
    pad = _pad(mid, hy) + _pad(half, 0)
    return (mid - half - pad, mid + half + pad)


# ---------------------------------------------------------------------------
# grid operators


class GridOperator:
    """2×2 real matrix with entries in (1/√2)·Z[√2] mapping Z[ω] to Z[ω].

    Entry (i, j) is stored as v[i][j] with entry = v[i][j] / √2.
    """

    __slots__ = ("v",)

    def __init__(self, v11, v12, v21, v22):
        self.v = tuple(ZRoot2.coerce(x) for x in (v11, v12, v21, v22))

    @staticmethod
    def from_entries(e11, e12, e21, e22) -> GridOperator:
        """Build from entries given as ZRoot2/int (multiplied by √2 internally)."""
        return GridOperator(*(ZRoot2.coerce(e).times_sqrt2() for e in (e11, e12, e21, e22)))

    def __repr__(self) -> str:
        return "GridOperator(" + ", ".join(f"({x})/√2" for x in self.v) + ")"

    def __eq__(self, other) -> bool:
        return isinstance(other, GridOperator) and self.v == other.v

    def __hash__(self) -> int:
        return hash(self.v)

    def __matmul__(self, other: GridOperator) -> GridOperator:
        a, b, c, d = self.v
        e, f, g, h = other.v
        return GridOperator(
            (a * e + b * g).div_sqrt2(),
            (a * f + b * h).div_sqrt2(),
            (c * e + d * g).div_sqrt2(),
            (c * f + d * h).div_sqrt2(),
        )

    def det(self) -> ZRoot2:
        a, b, c, d = self.v
        return (a * d - b * c).div_sqrt2().div_sqrt2()

    def is_special(self) -> bool:
        return self.det() in (ZRoot2(1), ZRoot2(-1))

    def bullet(self) -> GridOperator:
        return GridOperator(*(-x.bullet() for x in self.v))

    def transpose(self) -> GridOperator:
        a, b, c, d = self.v
        return GridOperator(a, c, b, d)

    def inverse(self) -> GridOperator:
        if not self.is_special():
            raise ValueError("only special grid operators are invertible over Z[ω]")
        dt = self.det()
        a, b, c, d = self.v
        return GridOperator(d * dt, -b * dt, -c * dt, a * dt)

    def entries_qroot2(self) -> tuple:
        inv = QRoot2(0, 1, 2)
        return tuple(QRoot2(x.a, x.b) * inv for x in self.v)

    def to_mpf(self, prec: int) -> tuple:
        r2 = mpmath.sqrt(2)
        return tuple(x.to_mpf(prec) / r2 for x in self.v)

    def satisfies_grid_parity(self) -> bool:
        """Parity conditions characterising grid operators."""
        # entry = a + a'/√2  ⇔  v = a' + a√2
        a_int = [x.b for x in self.v]
        a_half = [x.a for x in self.v]
        return sum(a_int) % 2 == 0 and len({y % 2 for y in a_half}) == 1

    def apply(self, u: ZOmega) -> ZOmega:
        """G·u for u ∈ Z[ω] viewed as a vector in R²."""
        a, b, c, d = u.coeffs()
        X = ZRoot2(c - a, d)  # √2·Re(u)
        Y = ZRoot2(c + a, b)  # √2·Im(u)
        g11, g12, g21, g22 = self.v
        X2 = (g11 * X + g12 * Y).div_sqrt2()
        Y2 = (g21 * X + g22 * Y).div_sqrt2()
        # X2 = (c'-a') + d'√2, Y2 = (c'+a') + b'√2
        s, t = X2.a, Y2.a
        if (s + t) % 2:
            raise ArithmeticError("operator does not preserve Z[ω]")
        return ZOmega((t - s) // 2, Y2.b, (s + t) // 2, X2.b)

    def apply_domega(self, u: DOmega) -> DOmega:
        return DOmega(self.apply(u.value), u.k)


IDENTITY = GridOperator.from_entries(1, 0, 0, 1)
OP_R = GridOperator(1, -1, 1, 1)
OP_K = GridOperator(ZRoot2(1, -1), -1, ZRoot2(1, 1), 1)
OP_K_BULLET = OP_K.bullet()
OP_X = GridOperator.from_entries(0, 1, 1, 0)
OP_Z = GridOperator.from_entries(1, 0, 0, -1)


def op_A_power(n: int) -> GridOperator:
    return GridOperator.from_entries(1, -2 * n, 0, 1)


def op_B_power(n: int) -> GridOperator:
    return GridOperator.from_entries(1, ZRoot2(0, n), 0, 1)


def shift_conjugate(G: GridOperator, k: int) -> GridOperator:
    """σ^k G σ^k = [[λ^k g11, g12], [g21, λ^(-k) g22]]."""
    a, b, c, d = G.v
    return GridOperator(a * lambda_power(k), b, c, d * lambda_power(-k))


# ---------------------------------------------------------------------------
# states


def _congruence(D: tuple, G: tuple) -> tuple:
    """Gᵀ D G for symmetric D = (d11, d12, d22), G = (g11, g12, g21, g22)."""
    d11, d12, d22 = D
    g11, g12, g21, g22 = G
    # D G
    m11 = d11 * g11 + d12 * g21
    m12 = d11 * g12 + d12 * g22
    m21 = d12 * g11 + d22 * g21
    m22 = d12 * g12 + d22 * g22
    return (g11 * m11 + g21 * m21, g11 * m12 + g21 * m22, g12 * m12 + g22 * m22)


def _ln_lambda():
    return mpmath.log(1 + mpmath.sqrt(2))


@dataclass(frozen=True)
class State:
    """Pair of determinant-1 positive definite forms (D, Δ)."""

    D: tuple
    Delta: tuple

    @staticmethod
    def from_ellipses(A: Ellipse, B: Ellipse) -> State:
        sa = mpmath.sqrt(A.det())
        sb = mpmath.sqrt(B.det())
        return State(tuple(x / sa for x in A.D), tuple(x / sb for x in B.D))

    @property
    def b(self):
        return self.D[1]

    @property
    def beta(self):
        return self.Delta[1]

    @property
    def z(self):
        return mpmath.log(self.D[2] / self.D[0]) / (2 * _ln_lambda())

    @property
    def zeta(self):
        return mpmath.log(self.Delta[2] / self.Delta[0]) / (2 * _ln_lambda())

    @property
    def e(self):
        return mpmath.sqrt(self.D[0] * self.D[2])

    @property
    def epsilon(self):
        return mpmath.sqrt(self.Delta[0] * self.Delta[2])

    def skew(self):
        return self.D[1] ** 2 + self.Delta[1] ** 2

    def bias(self):
        return self.zeta - self.z

    def act(self, G: GridOperator, prec: int) -> State:
        g = G.to_mpf(prec)
        gb = G.bullet().to_mpf(prec)
        return State(_congruence(self.D, g), _congruence(self.Delta, gb))

    def shift(self, k: int) -> State:
        """Apply σ^k to D and τ^k to Δ (preserves skew, bias += 2k)."""
        lk = (1 + mpmath.sqrt(2)) ** k
        d11, d12, d22 = self.D
        e11, e12, e22 = self.Delta
        sgn = -1 if k % 2 else 1
        return State((d11 * lk, d12, d22 / lk), (e11 / lk, sgn * e12, e22 * lk))

    def uprightness(self) -> tuple:
        return (uprightness(Ellipse(self.D)), uprightness(Ellipse(self.Delta)))


def step_operator(s: State, prec: int = 0, consts: StepConstants = DEFAULT) -> GridOperator:
    """Special grid operator G with skew(s·G) ≤ Q·skew(s); requires skew(s) ≥ P."""
    prec = prec or mpmath.mp.prec
    if s.skew() < consts.P:
        raise ValueError("skew below threshold; no step needed")
    k = int(mpmath.floor((1 - s.bias()) / 2))
    t = s.shift(k)
    G = IDENTITY
    if t.beta < 0:
        G = G @ OP_Z
        t = t.act(OP_Z, prec)
    if t.z + t.zeta < 0:
        G = G @ OP_X
        t = t.act(OP_X, prec)
    z, zeta = t.z, t.zeta
    r, a, bb = consts.r, consts.a, consts.b
    lam = 1 + mpmath.sqrt(2)
    if t.b >= 0:
        if -r <= z <= r and -r <= zeta <= r:
            H = OP_R
        elif z <= -a and zeta >= r:
            H = OP_K
        elif z >= r and zeta <= -a:
            H = OP_K_BULLET
        elif z >= -a and zeta >= -a:
            c = min(z, zeta)
            H = op_A_power(max(1, int(mpmath.floor(lam**c / 2))))
        else:  # pragma: no cover - the regions cover the strip
            raise AssertionError(f"no case for z={z}, ζ={zeta}, b≥0")
    else:
        if -r <= z <= r and -r <= zeta <= r:
            H = OP_R
        elif z >= -bb and zeta >= -bb:
            c = min(z, zeta)
            H = op_B_power(max(1, int(mpmath.floor(lam**c / mpmath.sqrt(2)))))
        else:  # pragma: no cover
            raise AssertionError(f"no case for z={z}, ζ={zeta}, b<0")
    return shift_conjugate(G @ H, k)


@dataclass
class ReductionTrace:
    iterations: int = 0
    skews: list = field(default_factory=list)
    lines: list = field(default_factory=list)


def reduce_state(
    s: State,
    prec: int = 0,
    consts: StepConstants = DEFAULT,
    debug: Optional[Callable[[str], None]] = None,
    trace: Optional[ReductionTrace] = None,
) -> tuple[GridOperator, State]:
    """Accumulated operator M = G1·G2⋯ and final state s·M with skew ≤ P."""
    prec = prec or mpmath.mp.prec
    M = IDENTITY
    it = 0
    while s.skew() >= consts.P:
        G = step_operator(s, prec, consts)
        s_next = s.act(G, prec)
        it += 1
        if debug is not None or trace is not None:
            line = (
                f"iter={it} skew={mpmath.nstr(s.skew(), 8)} bias={mpmath.nstr(s.bias(), 6)} "
                f"op={G!r} new_skew={mpmath.nstr(s_next.skew(), 8)}"
            )
            if debug is not None:
                debug(line)
            if trace is not None:
                trace.lines.append(line)
                trace.skews.append(s_next.skew())
        M = M @ G
        s = s_next
    if trace is not None:
        trace.iterations = it
    return M, s


def reduce_skew(A: Ellipse, B: Ellipse, prec: int = 0, debug=None) -> GridOperator:
    """Grid operator G with G(A), G•(B) at least π/(4√(P+1))-upright."""
    prec = prec or mpmath.mp.prec
    with mpmath.workprec(prec):
        M, _ = reduce_state(State.from_ellipses(A, B), prec, debug=debug)
    return M.inverse()


def transform_ellipse(E: Ellipse, G: GridOperator, prec: int) -> Ellipse:
    """Image G(E) of an ellipse under an invertible grid operator."""
    Minv = G.inverse().to_mpf(prec)
    g = G.to_mpf(prec)
    D = _congruence(E.D, Minv)
    px, py = E.p
    return Ellipse(D, (g[0] * px + g[1] * py, g[2] * px + g[3] * py))


# ---------------------------------------------------------------------------
# enumeration


_HALF_R2 = QRoot2(0, 1, 2)


def _zomega_from(alpha: ZRoot2, beta: ZRoot2, odd: bool) -> ZOmega:
    # α = p + q√2 ↦ (-q, 0, q, p); βi = (p' + q'√2)ω² ↦ (q', p', q', 0)
    u = ZOmega(-alpha.b + beta.b, beta.a, alpha.b + beta.b, alpha.a)
    return u + ZOmega(0, 0, 1, 0) if odd else u


def enumerate_upright_rects(A: tuple, B: tuple) -> list[ZOmega]:
    """All u ∈ Z[ω] with u ∈ A and u• ∈ B for axis-aligned rectangles.

    A, B are ((x0, x1), (y0, y1)) with exact-real endpoints.
    """
    (ax, ay), (bx, by) = A, B
    out = []
    for odd in (False, True):
        off = _HALF_R2 if odd else QRoot2(0)
        # ω = (1+i)/√2 and ω• = -ω
        xs = enumerate_grid_1d(
            (QRoot2.coerce(ax[0]) - off, QRoot2.coerce(ax[1]) - off),
            (QRoot2.coerce(bx[0]) + off, QRoot2.coerce(bx[1]) + off),
        )
        if not xs:
            continue
        ys = enumerate_grid_1d(
            (QRoot2.coerce(ay[0]) - off, QRoot2.coerce(ay[1]) - off),
            (QRoot2.coerce(by[0]) + off, QRoot2.coerce(by[1]) + off),
        )
        for al in xs:
            for be in ys:
                out.append(_zomega_from(al, be, odd))
    return out


class _LevelSolver:
    """Candidates of the transformed problem at one scale, column by column."""

    def __init__(self, EA: Ellipse, EB: Ellipse, prec: int):
        self.EA, self.EB, self.prec = EA, EB, prec

    def candidates(self) -> Iterator[ZOmega]:
        # mpmath's precision is global, so it is set per column and never
        # held across a yield
        EA, EB = self.EA, self.EB
        with mpmath.workprec(self.prec):
            (ax, _), (bx, _) = bbox(EA), bbox(EB)
        for odd in (False, True):
            off = _HALF_R2 if odd else QRoot2(0)
            xs = enumerate_grid_1d(
                (QRoot2.coerce(ax[0]) - off, QRoot2.coerce(ax[1]) - off),
                (QRoot2.coerce(bx[0]) + off, QRoot2.coerce(bx[1]) + off),
            )
            for al in xs:
                with mpmath.workprec(self.prec):
                    xa = (QRoot2(al.a, al.b) + off).to_mpf(self.prec)
                    xb = (QRoot2(al.a, -al.b) - off).to_mpf(self.prec)
                    ca = chord_y(EA, xa)
                    cb = chord_y(EB, xb) if ca is not None else None
                if ca is None or cb is None:
                    continue
                ys = enumerate_grid_1d(
                    (QRoot2.coerce(ca[0]) - off, QRoot2.coerce(ca[1]) - off),
                    (QRoot2.coerce(cb[0]) + off, QRoot2.coerce(cb[1]) + off),
                )
                for be in ys:
                    yield _zomega_from(al, be, odd)


class ConvexRegion:
    """Bounded convex region with exact membership for points of D[ω]."""

    def contains(self, u: DOmega) -> bool:
        raise NotImplementedError

    def ellipse(self, prec: int) -> Ellipse:
        """An ellipse containing the region."""
        raise NotImplementedError

    def intersect_line(self, p: tuple, d: tuple, prec: int) -> Optional[tuple]:
        """Parameter interval {t : p + t·d ∈ region}, outward-rounded, or None."""
        raise NotImplementedError

    def precision_hint(self) -> int:
        return 64

    def bbox(self, prec: int) -> tuple:
        with mpmath.workprec(prec):
            return bbox(self.ellipse(prec))


class TransformedRegion(ConvexRegion):
    """G(R) for a special grid operator G (membership by pulling back)."""

    def __init__(self, region: ConvexRegion, G: GridOperator):
        if not G.is_special():
            raise ValueError("grid operator must be special")
        self.region, self.G, self.Ginv = region, G, G.inverse()

    def contains(self, u: DOmega) -> bool:
        return self.region.contains(self.Ginv.apply_domega(u))

    def ellipse(self, prec: int) -> Ellipse:
        with mpmath.workprec(prec):
            return transform_ellipse(self.region.ellipse(prec), self.G, prec)

    def intersect_line(self, p, d, prec):
        with mpmath.workprec(prec):
            g = self.Ginv.to_mpf(prec)
            q = (g[0] * p[0] + g[1] * p[1], g[2] * p[0] + g[3] * p[1])
            e = (g[0] * d[0] + g[1] * d[1], g[2] * d[0] + g[3] * d[1])
            return self.region.intersect_line(q, e, prec)

    def precision_hint(self) -> int:
        return self.region.precision_hint()


def apply_grid_operator(problem: tuple, G: GridOperator) -> tuple:
    """(A, B) ↦ (G(A), G•(B)); u solves the first iff G·u solves the second."""
    A, B = problem
    return TransformedRegion(A, G), TransformedRegion(B, G.bullet())


@dataclass
class ScaledProblem:
    """Precomputed data for enumerating √2^k A × (-√2)^k B for all k."""

    A: ConvexRegion
    B: ConvexRegion
    prec: int
    M: GridOperator  # u = M·v, v in the upright frame
    EA: Ellipse  # M⁻¹(ellipse of A)
    EB: Ellipse  # (M•)⁻¹(ellipse of B)
    iterations: int

    @staticmethod
    def build(A: ConvexRegion, B: ConvexRegion, prec: int = 0, debug=None) -> ScaledProblem:
        prec = max(prec, A.precision_hint(), B.precision_hint(), 128)
        with mpmath.workprec(prec):
            EA0, EB0 = A.ellipse(prec), B.ellipse(prec)
            trace = ReductionTrace()
            M, _ = reduce_state(State.from_ellipses(EA0, EB0), prec, debug=debug, trace=trace)
            Minv = M.inverse()
            EA = transform_ellipse(EA0, Minv, prec)
            EB = transform_ellipse(EB0, Minv.bullet(), prec)
        extra = 2 * max(max(abs(x.a).bit_length(), abs(x.b).bit_length()) for x in M.v)
        return ScaledProblem(A, B, prec + extra, M, EA, EB, trace.iterations)

    def level(self, k: int) -> list[DOmega]:
        """Solutions with least denominator exponent exactly k."""
        return list(self.iter_level(k))

    def iter_level(self, k: int) -> Iterator[DOmega]:
        """Lazy version of :meth:`level`."""
        prec = self.prec + k
        with mpmath.workprec(prec):
            s = mpmath.sqrt(2) ** k
            EA = self.EA.scaled(s)
            EB = self.EB.scaled(-s if k % 2 else s)
            cands = _LevelSolver(EA, EB, prec).candidates()
        for v in cands:
            w = self.M.apply(v)
            if k > 0 and w.sqrt2_divides():
                continue
            u = DOmega(w, k)
            if self.A.contains(u) and self.B.contains(u.bullet()):
                yield u

    def stream(self, k0: int = 0) -> Iterator[tuple[DOmega, int]]:
        k = k0
        while True:
            for u in self.level(k):
                yield u, k
            k += 1


def enumerate_convex(A: ConvexRegion, B: ConvexRegion, prec: int = 0) -> list[ZOmega]:
    """All u ∈ Z[ω] with u ∈ A and u• ∈ B."""
    sp = ScaledProblem.build(A, B, prec)
    return _level0(sp)


def _level0(sp: ScaledProblem) -> list[ZOmega]:
    with mpmath.workprec(sp.prec):
        cands = list(_LevelSolver(sp.EA, sp.EB, sp.prec).candidates())
    out = []
    for v in cands:
        w = sp.M.apply(v)
        u = DOmega(w, 0)
        if sp.A.contains(u) and sp.B.contains(u.bullet()):
            out.append(w)
    return out


def enumerate_scaled(A: ConvexRegion, B: ConvexRegion, prec: int = 0) -> Iterator[tuple[DOmega, int]]:
    """Stream of (u, k): u ∈ A, u• ∈ B, u with least denominator exponent k."""
    return ScaledProblem.build(A, B, prec).stream()
