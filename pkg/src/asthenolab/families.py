"""Parameterized constructions: the 8-dimensional astheno family, SKT frames in
dimension six, deformed coframes and the degree-4 SKT hypersurfaces.

Complex coframes are written in dimension ``2n`` with indices ``0..n-1`` for
``omega^j`` and ``n..2n-1`` for their conjugates.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .forms import Form
from .hermitian import ComplexStructure, HermitianStructure
from .scalar import I, Q, Scalar, as_scalar, symbols

ZERO = Scalar.const(0)
ONE = Scalar.const(1)


class Inadmissible(ValueError):
    """The deformed forms do not define an almost complex structure."""


class EliminationInvalid(ValueError):
    """``gamma_5`` (or ``delta_5``) vanishes, so ``u`` cannot be eliminated."""


def _cw(n: int, *idx: int) -> Form:
    """Complex monomial: positive j is omega^j, negative j is conj omega^j."""
    t = tuple(j - 1 if j > 0 else n - j - 1 for j in idx)
    return Form(2 * n, {t: 1})


# ------------------------------------------------------------------ family 8
_FAMILY_TERMS = (
    (1, 2), (1, 3), (1, -1), (1, -2), (1, -3), (2, 3),
    (2, -1), (2, -2), (2, -3), (3, -1), (3, -2), (3, -3),
)


class Family8:
    """The 12-parameter family of 2-step nilpotent algebras with
    ``d eta^1 = d eta^2 = d eta^3 = 0`` and ``d eta^4 = sum a_k eta^{..}``."""

    def __init__(self, values: Mapping[str, object] | None = None):
        if values is None:
            self.a = symbols([f"a{k}" for k in range(1, 13)])
        else:
            unknown = set(values) - {f"a{k}" for k in range(1, 13)}
            if unknown:
                raise KeyError(f"unknown family parameters {sorted(unknown)}")
            self.a = [as_scalar(values.get(f"a{k}", 0)) for k in range(1, 13)]

    @cached_property
    def d_eta4(self) -> Form:
        acc = Form.zero(8)
        for coef, (p, q) in zip(self.a, _FAMILY_TERMS):
            if coef:
                acc = acc + _cw(4, p, q) * coef
        return acc

    @cached_property
    def complex_structure(self) -> ComplexStructure:
        z = Form.zero(8)
        return ComplexStructure.from_equations([z, z, z, self.d_eta4], name="family8")

    @property
    def algebra(self):
        return self.complex_structure.algebra

    def metric(self, weights: Sequence | None = None) -> HermitianStructure:
        weights = [1, 1, 1, 1] if weights is None else list(weights)
        for w in weights:
            re, im = as_scalar(w).constant()
            if im != 0 or re <= 0:
                raise ValueError("weights must be positive rationals")
        return HermitianStructure.diagonal(self.complex_structure, weights)


def astheno_condition_expected() -> Scalar:
    """``sum |a_k|^2 (k in 1,2,4,5,6,7,9,10,11) - 2 Re(a3 a8~ + a3 a12~ + a8 a12~)``."""
    a = dict(zip(range(1, 13), symbols([f"a{k}" for k in range(1, 13)])))
    s = ZERO
    for k in (1, 2, 4, 5, 6, 7, 9, 10, 11):
        s = s + a[k].abs2()
    cross = a[3] * a[8].conj() + a[3] * a[12].conj() + a[8] * a[12].conj()
    return s - cross.re().scale(2)


@dataclass(frozen=True)
class DerivedCondition:
    polynomial: Scalar  # normalized: coefficient of |a1|^2 is 1
    factor: Scalar  # raw coefficient = factor * polynomial
    monomial: tuple  # complex-coframe index tuple carrying the coefficient


def derive_astheno_condition(fam: Family8 | None = None, weights: Sequence | None = None) -> DerivedCondition:
    """Coefficient of ``ddbar F^2`` on ``eta^{123 1~2~3~}``, normalized."""
    fam = fam or Family8()
    hs = fam.metric(weights)
    w = hs.ddbar_F_power(2)
    key = (0, 1, 2, 4, 5, 6)
    extra = [k for k in w.terms if k != key]
    if extra:
        raise AssertionError(f"unexpected components in ddbar F^2: {extra}")
    raw = w.terms.get(key, ZERO)
    return DerivedCondition(*normalize_polynomial(raw), key)


def normalize_polynomial(raw: Scalar) -> tuple[Scalar, Scalar]:
    if not raw:
        return ZERO, ONE
    lead = raw.sorted_terms()[0][1]
    factor = Scalar.const(*lead)
    return raw * factor.inverse(), factor


def weighted_metric_astheno(fam: Family8, weights: Sequence) -> bool:
    return fam.metric(weights).check_condition("astheno").holds


# ------------------------------------------------------------------ SKT frame
@dataclass(frozen=True)
class SKTFrame:
    """``d omega^3 = A w^{1~2} + B w^{2~2} + C w^{11~} + D w^{12~} + E w^{12}``."""

    A: Scalar = ZERO
    B: Scalar = ZERO
    C: Scalar = ZERO
    D: Scalar = ZERO
    E: Scalar = ZERO

    def __post_init__(self):
        for k in "ABCDE":
            object.__setattr__(self, k, as_scalar(getattr(self, k)))

    @classmethod
    def symbolic(cls) -> "SKTFrame":
        return cls(*symbols("A B C D E"))

    @classmethod
    def normal_form(cls, rho, G, H) -> "SKTFrame":
        """``d omega^3 = rho w^{12} + w^{11~} + G w^{12~} + H w^{22~}``."""
        return cls(A=0, B=-as_scalar(H), C=1, D=G, E=rho)

    @property
    def Y(self) -> list:
        return [[self.A, self.B], [self.C, self.D]]

    @property
    def adjY(self) -> list:
        return [[self.D, -self.B], [-self.C, self.A]]

    def d_omega3(self) -> Form:
        return (
            _cw(3, -1, 2) * self.A
            + _cw(3, -2, 2) * self.B
            + _cw(3, 1, -1) * self.C
            + _cw(3, 1, -2) * self.D
            + _cw(3, 1, 2) * self.E
        )

    def complex_structure(self) -> ComplexStructure:
        z = Form.zero(6)
        return ComplexStructure.from_equations([z, z, self.d_omega3()], name="skt-frame")

    def free_symbols(self) -> set[str]:
        out: set[str] = set()
        for k in "ABCDE":
            out |= getattr(self, k).free_symbols()
        return out


def skt_condition(fr: SKTFrame) -> Scalar:
    """``|A|^2 + |D|^2 + |E|^2 + 2 Re(B~ C)``."""
    return fr.A.abs2() + fr.D.abs2() + fr.E.abs2() + (fr.B.conj() * fr.C).re().scale(2)


def skt_condition_direct(fr: SKTFrame) -> Scalar:
    """The coefficient of ``ddbar F`` on ``w^{12 1~2~}`` for the diagonal metric."""
    hs = HermitianStructure.diagonal(fr.complex_structure())
    w = hs.ddbar_F_power(1)
    key = (0, 1, 3, 4)
    return w.terms.get(key, ZERO)


# ------------------------------------------------------------------ deformations
@dataclass(frozen=True)
class DeformationPoint:
    a: Scalar = ZERO
    b: Scalar = ZERO
    c: Scalar = ZERO
    f: Scalar = ZERO
    x: Scalar = ZERO
    y: Scalar = ZERO
    u: Scalar = ZERO

    def __post_init__(self):
        for k in "abcfxyu":
            object.__setattr__(self, k, as_scalar(getattr(self, k)))

    @classmethod
    def symbolic(cls, with_xy: bool = False) -> "DeformationPoint":
        a, b, c, f, u = symbols("a b c f u")
        if with_xy:
            x, y = symbols("x y")
            return cls(a, b, c, f, x, y, u)
        return cls(a, b, c, f, ZERO, ZERO, u)

    @property
    def X(self) -> list:
        return [[self.a, self.b], [self.c, self.f]]

    @property
    def gamma(self) -> Scalar:
        """``tr(X X~)``."""
        a, b, c, f = self.a, self.b, self.c, self.f
        return a.abs2() + f.abs2() + b * c.conj() + b.conj() * c

    @property
    def delta(self) -> Scalar:
        """``det(X X~)``."""
        a, b, c, f = self.a, self.b, self.c, self.f
        return a.abs2() * f.abs2() + b.abs2() * c.abs2() - a * f * b.conj() * c.conj() - b * c * a.conj() * f.conj()

    @property
    def p1(self) -> Scalar:
        return ONE - self.gamma + self.delta

    def is_admissible(self) -> bool:
        """``|u| != 1`` and ``p(1) != 0`` (parameter-free points only)."""
        return self.u.abs2() != ONE and bool(self.p1)

    def with_u(self, u) -> "DeformationPoint":
        return DeformationPoint(self.a, self.b, self.c, self.f, self.x, self.y, u)


def deformed_coframe(pt: DeformationPoint) -> list[Form]:
    """``eta^j`` written in the base coframe ``(omega, conj omega)``."""
    return [
        _cw(3, 1) + _cw(3, -1) * pt.a + _cw(3, -2) * pt.b,
        _cw(3, 2) + _cw(3, -1) * pt.c + _cw(3, -2) * pt.f,
        _cw(3, 3) + _cw(3, -1) * pt.x + _cw(3, -2) * pt.y + _cw(3, -3) * pt.u,
    ]


@dataclass
class Deformation:
    base: SKTFrame
    point: DeformationPoint
    eta: list  # eta^j in the base complex coframe
    d_eta3: Form  # in the base complex coframe
    d_eta3_wedge_eta12: Form

    def complex_structure(self) -> ComplexStructure:
        """The deformed structure on the real algebra of the base frame."""
        base_cs = self.base.complex_structure()
        return ComplexStructure(base_cs.algebra, [base_cs.to_real(e) for e in self.eta])


def deform_coframe(base: SKTFrame, pt: DeformationPoint, *, check: bool = True) -> Deformation:
    """Build the deformed coframe literally and expand ``d eta^3``."""
    if check and not _pt_symbols(pt) and not pt.is_admissible():
        raise Inadmissible("deformation point violates |u| != 1, p(1) != 0")
    eta = deformed_coframe(pt)
    d = _base_d(base)
    d_eta3 = Form.zero(6)
    for (m,), coef in eta[2].items():
        d_eta3 = d_eta3 + d[m] * coef
    w = d_eta3.wedge(eta[0]).wedge(eta[1])
    return Deformation(base, pt, eta, d_eta3, w)


def _pt_symbols(pt: DeformationPoint) -> set[str]:
    out: set[str] = set()
    for k in "abcfxyu":
        out |= getattr(pt, k).free_symbols()
    return out


def _base_d(base: SKTFrame) -> list[Form]:
    d3 = base.d_omega3()
    swap = [3, 4, 5, 0, 1, 2]
    z = Form.zero(6)
    return [z, z, d3, z, z, d3.conjugate(swap)]


def integrability_residual(base: SKTFrame, pt: DeformationPoint) -> Scalar:
    """``-det(X) E + (tr(X Y~) - E~) u + tr(X adj Y)``."""
    X, Y, adj = pt.X, base.Y, base.adjY
    detX = pt.a * pt.f - pt.b * pt.c
    trXYb = sum((X[i][k] * Y[k][i].conj() for i in range(2) for k in range(2)), ZERO)
    trXadj = sum((X[i][k] * adj[k][i] for i in range(2) for k in range(2)), ZERO)
    return -(detX * base.E) + (trXYb - base.E.conj()) * pt.u + trXadj


def integrability_bracket(base: SKTFrame, pt: DeformationPoint) -> Scalar:
    """The displayed expansion ``cEb - cB + cuB~ - fEa + fA + fuD~ - uE~ - bC + buC~ + aD + auA~``."""
    a, b, c, f, u = pt.a, pt.b, pt.c, pt.f, pt.u
    A, B, C, D, E = base.A, base.B, base.C, base.D, base.E
    return (c * E * b - c * B + c * u * B.conj() - f * E * a + f * A + f * u * D.conj()
            - u * E.conj() - b * C + b * u * C.conj() + a * D + a * u * A.conj())


# ------------------------------------------------------------------ hypersurfaces
def gamma_coeffs(G, H, pt: DeformationPoint, *, drop_b: bool = False) -> tuple:
    """``(gamma_1, ..., gamma_6)`` for the non-abelian base (``rho = 1``).

    ``gamma_6`` carries the ``+ b`` term required by the integrability
    equation, so that ``conj(gamma_5) u + gamma_6 = 0`` is exactly that
    equation; ``drop_b=True`` gives the variant without it.
    """
    G, H = as_scalar(G), as_scalar(H)
    a, b, c, f = pt.a, pt.b, pt.c, pt.f
    ab, bb, cb, fb = a.conj(), b.conj(), c.conj(), f.conj()
    Gb, Hb = G.conj(), H.conj()
    g1 = -ONE + c + f.abs2() - G * fb * c + c.abs2() * H
    g2 = b + G * a * bb - b.abs2() + H - H * a.abs2()
    g3 = G - f + bb * f + ab * c * H - bb * c * G
    g4 = -ab - bb * f + ab * f * Gb - ab * c * Hb
    g5 = ONE - bb - G * fb + cb * H
    g6 = a * f - c * b - c * H - a * G
    if not drop_b:
        g6 = g6 + b
    return g1, g2, g3, g4, g5, g6


def delta_coeffs(G, H, pt: DeformationPoint) -> tuple:
    G, H = as_scalar(G), as_scalar(H)
    a, b, c, f = pt.a, pt.b, pt.c, pt.f
    ab, bb, cb, fb = a.conj(), b.conj(), c.conj(), f.conj()
    Gb, Hb = G.conj(), H.conj()
    d1 = b.abs2() - Gb * ab * b - Hb + Hb * a.abs2()
    d2 = -ONE + f.abs2() - Gb * f * cb + Hb * c.abs2()
    d3 = G + bb * f - G * bb * c + c * ab * H
    d4 = -bb * f + f * ab * Gb - c * ab * Hb
    d5 = -fb * G + cb * H - bb
    d6 = -c * H + b - a * G
    return d1, d2, d3, d4, d5, d6


def gamma_d_eta3(G, H, pt: DeformationPoint) -> Form:
    """``p(1) d eta^3`` from the gamma display, in the deformed coframe."""
    g1, g2, g3, g4, g5, g6 = gamma_coeffs(G, H, pt)
    u = pt.u
    ub = u.abs2()
    return (
        _cw(3, 1, 2) * (g5 * (ONE - ub))
        + _cw(3, 1, -1) * (-g1 + u * g1.conj())
        + _cw(3, 1, -2) * (g3 + u * g4)
        + _cw(3, -1, 2) * (g4.conj() + u * g3.conj())
        + _cw(3, -2, 2) * (-g2 + u * g2.conj())
    )


def delta_d_eta3(G, H, pt: DeformationPoint) -> Form:
    """``p(1) d eta^3`` from the delta display, in the deformed coframe."""
    d1, d2, d3, d4, d5, d6 = delta_coeffs(G, H, pt)
    u = pt.u
    return (
        _cw(3, 2, -2) * (d1 * u - d1.conj())
        + _cw(3, 1, -1) * (d2 * u - d2.conj())
        + _cw(3, 1, -2) * (d4 * u + d3)
        + _cw(3, 2, -1) * (-d3.conj() * u - d4.conj())
        + _cw(3, 1, 2) * (d6.conj() * u + d5)
    )


def quartic_gamma(g: Sequence[Scalar]) -> Scalar:
    """The eliminated degree-4 equation in the gamma coefficients."""
    g1, g2, g3, g4, g5, g6 = g
    s5, s6 = g5.abs2(), g6.abs2()
    inner = g3.abs2() + g4.abs2() + (g1.conj() * g2).re().scale(2)
    cross = (g5 * g6 * (g3.conj() * g4 - g1.conj() * g2.conj())).re().scale(4)
    return (s5 + s6) * inner + (s5 - s6) ** 2 - cross


def quartic_delta(dl: Sequence[Scalar], *, double_cross: bool = False) -> Scalar:
    """The eliminated degree-4 equation in the delta coefficients.

    The ``eta^{1 2bar}`` and ``eta^{2 1bar}`` coefficients of the display
    contribute ``conj(delta_3) delta_4`` once to the cross term; the
    ``double_cross=True`` variant counts it twice and is not the SKT locus.
    """
    d1, d2, d3, d4, d5, d6 = dl
    s5, s6 = d5.abs2(), d6.abs2()
    inner = d3.abs2() + d4.abs2() - (d1 * d2.conj()).re().scale(2)
    mixed = d3.conj() * d4
    if double_cross:
        mixed = mixed + d4 * d3.conj()
    cross = (d5 * d6 * (d1 * d2 + mixed)).re().scale(4)
    return (s5 + s6) * inner + (s5 - s6) ** 2 - cross


def skt_constraint(rho, G, H) -> Scalar:
    """``rho + |G|^2 - 2 Re H`` (zero for an SKT base)."""
    G, H = as_scalar(G), as_scalar(H)
    return as_scalar(rho) + G.abs2() - H.re().scale(2)


@dataclass(frozen=True)
class HypersurfacePoint:
    u: Scalar
    residual: Scalar
    coeffs: tuple


def hypersurface_eval(rho: int, G, H, a, b, c, f) -> HypersurfacePoint:
    """Solve the linear equation for ``u`` and evaluate the quartic residual."""
    if rho not in (0, 1):
        raise ValueError("rho must be 0 or 1")
    if skt_constraint(rho, G, H):
        raise ValueError("base is not SKT: rho + |G|^2 != 2 Re H")
    pt = DeformationPoint(a, b, c, f)
    coeffs = gamma_coeffs(G, H, pt) if rho == 1 else delta_coeffs(G, H, pt)
    if any(x.free_symbols() for x in coeffs):
        raise ValueError("hypersurface_eval needs parameter-free input")
    k5, k6 = coeffs[4], coeffs[5]
    if not k5:
        raise EliminationInvalid("gamma_5 = 0" if rho == 1 else "delta_5 = 0")
    u = -(k6 / k5.conj())
    residual = quartic_gamma(coeffs) if rho == 1 else quartic_delta(coeffs)
    return HypersurfacePoint(u, residual, coeffs)


def hypersurface_polynomial(rho: int, G, H) -> Scalar:
    """The quartic as a polynomial in ``a, b, c, f`` and their conjugates."""
    pt = DeformationPoint.symbolic()
    if rho == 1:
        return quartic_gamma(gamma_coeffs(G, H, pt))
    return quartic_delta(delta_coeffs(G, H, pt))


def hypersurface_gradient_at_origin(rho: int, G, H) -> list[Scalar]:
    """Gradient in ``R^8 = (Re a, Im a, Re b, Im b, Re c, Im c, Re f, Im f)``."""
    if skt_constraint(rho, G, H):
        raise ValueError("base is not SKT: rho + |G|^2 != 2 Re H")
    poly = hypersurface_polynomial(rho, G, H)
    origin = {k: 0 for k in "abcf"}
    out = []
    for k in "abcf":
        da = poly.diff(k).evaluate(origin)
        dab = poly.diff(k + "~").evaluate(origin)
        out.append(da + dab)
        out.append((da - dab) * Scalar.const(0, 1))
    return out


# ------------------------------------------------------------------ engine oracle
@dataclass(frozen=True)
class OracleResult:
    rho: int
    point: tuple  # (a, b, c, f)
    u: Scalar | None
    residual: Scalar | None
    integrable: bool | None
    skt: bool | None
    skipped: str | None = None

    @property
    def agrees(self) -> bool | None:
        if self.skipped:
            return None
        return (self.residual == 0) == bool(self.skt)


def deformed_hermitian(rho: int, G, H, pt: DeformationPoint) -> HermitianStructure:
    base = SKTFrame.normal_form(rho, G, H)
    cs = deform_coframe(base, pt).complex_structure()
    return HermitianStructure.diagonal(cs)


def oracle_point(rho: int, G, H, a, b, c, f) -> OracleResult:
    """Residual versus the direct SKT check on the deformed coframe."""
    key = tuple(as_scalar(v) for v in (a, b, c, f))
    try:
        hp = hypersurface_eval(rho, G, H, *key)
    except EliminationInvalid as exc:
        return OracleResult(rho, key, None, None, None, None, skipped=str(exc))
    pt = DeformationPoint(*key, u=hp.u)
    if not pt.is_admissible():
        return OracleResult(rho, key, hp.u, hp.residual, None, None, skipped="inadmissible")
    hs = deformed_hermitian(rho, G, H, pt)
    integ = hs.cs.integrable
    skt = hs.check_condition("skt").holds if integ else False
    return OracleResult(rho, key, hp.u, hp.residual, integ, skt)


def random_gauss(rng: random.Random, height: int = 8) -> Scalar:
    def q():
        return Q(rng.randint(-height, height), rng.randint(1, height))

    return Scalar.const(q(), q())


def random_skt_base(rng: random.Random, rho: int, height: int = 4) -> tuple[Scalar, Scalar]:
    """``(G, H)`` with ``rho + |G|^2 = 2 Re H``."""
    G = random_gauss(rng, height)
    re = (Q(rho) + G.abs2().constant()[0]) / 2
    im = Q(rng.randint(-height, height), rng.randint(1, height))
    return G, Scalar.const(re, im)


_H_IM = Scalar.symbol("h", real=True)


def on_surface_point(rng: random.Random, rho: int, height: int = 4, tries: int = 100) -> tuple | None:
    """An SKT base and a nonzero admissible point on its quartic, exactly.

    With ``c = 0`` the quartic is affine in ``Im H``, so random ``G, a, b, f``
    determine the base that puts the point on the hypersurface.  Returns
    ``(G, H, (a, b, c, f))`` or None.
    """
    for _ in range(tries):
        G = random_gauss(rng, height)
        a, b, f = (random_gauss(rng, height) for _ in range(3))
        pt = DeformationPoint(a, b, ZERO, f)
        re_h = (Q(rho) + G.abs2().constant()[0]) / 2
        H = Scalar.const(re_h) + _H_IM * I
        coeffs = gamma_coeffs(G, H, pt) if rho == 1 else delta_coeffs(G, H, pt)
        poly = quartic_gamma(coeffs) if rho == 1 else quartic_delta(coeffs)
        lin, const = ZERO, ZERO
        for mono, (re, im) in poly.terms.items():
            deg = dict(mono).get("h", 0)
            term = Scalar.const(re, im)
            if deg == 0:
                const = const + term
            elif deg == 1:
                lin = lin + term
            else:
                raise AssertionError("quartic is not affine in Im H on c = 0")
        if not lin:
            continue
        h_val = -(const / lin)
        re, im = h_val.constant()
        if im != 0:
            raise AssertionError("quartic is not real")
        H = Scalar.const(re_h, re)
        try:
            hp = hypersurface_eval(rho, G, H, a, b, ZERO, f)
        except EliminationInvalid:
            continue
        if hp.residual == 0 and DeformationPoint(a, b, ZERO, f, u=hp.u).is_admissible():
            return G, H, (a, b, ZERO, f)
    return None


def _scan_one(args) -> OracleResult:
    return oracle_point(*args)


def scan(rho: int, G, H, points: Iterable[tuple], workers: int = 1) -> list[OracleResult]:
    """Evaluate many points; results keep the input order."""
    jobs = [(rho, G, H, *p) for p in points]
    if workers <= 1:
        return [_scan_one(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(_scan_one, jobs, chunksize=8))


def seeded_points(seed: int, count: int, height: int = 8) -> list[tuple]:
    rng = random.Random(seed)
    return [tuple(random_gauss(rng, height) for _ in range(4)) for _ in range(count)]
