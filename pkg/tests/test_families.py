import random

import pytest

from asthenolab import families as fam
from asthenolab.families import DeformationPoint, Family8, SKTFrame
from asthenolab.hermitian import HermitianStructure
from asthenolab.scalar import Q, Scalar, symbols
from oracles import to_sympy


def test_family8_is_a_lie_algebra_with_integrable_structure():
    f = Family8()
    assert f.algebra.check_jacobi()
    assert f.complex_structure.integrable
    assert f.algebra.dim == 8


def test_family8_rejects_unknown_parameters():
    with pytest.raises(KeyError):
        Family8({"a13": 1})


def test_astheno_condition_polynomial():
    d = fam.derive_astheno_condition()
    assert d.polynomial == fam.astheno_condition_expected()
    assert d.polynomial.is_real()


def test_astheno_condition_real_form_via_sympy():
    # the polynomial is sum |a_k|^2 minus 2 Re of three cross terms
    p = to_sympy(fam.derive_astheno_condition().polynomial)
    import sympy as sp

    re = {k: sp.Symbol(f"a{k}_re", real=True) for k in range(1, 13)}
    im = {k: sp.Symbol(f"a{k}_im", real=True) for k in range(1, 13)}
    sq = sum(re[k] ** 2 + im[k] ** 2 for k in (1, 2, 4, 5, 6, 7, 9, 10, 11))
    cross = 0
    for x, y in ((3, 8), (3, 12), (8, 12)):
        cross += re[x] * re[y] + im[x] * im[y]
    assert sp.expand(p - sq + 2 * cross) == 0


def test_skt_criterion_symbolic():
    fr = SKTFrame.symbolic()
    direct, _ = fam.normalize_polynomial(fam.skt_condition_direct(fr))
    assert direct == fam.skt_condition(fr)


def test_normal_form_frame_equations():
    rho, G, H = 1, Scalar.const(1, 1), Scalar.const(Q(3, 2), 2)
    fr = SKTFrame.normal_form(rho, G, H)
    assert (fr.A, fr.B, fr.C, fr.D, fr.E) == (0, -H, 1, G, rho)
    assert fam.skt_constraint(rho, G, H) == 0
    hs = HermitianStructure.diagonal(fr.complex_structure())
    assert hs.check_condition("skt").holds


def test_integrability_equation_matches_engine():
    rng = random.Random(3)
    for _ in range(10):
        base = SKTFrame(*[fam.random_gauss(rng, 3) for _ in range(5)])
        pt = DeformationPoint(*[fam.random_gauss(rng, 2) for _ in range(4)])
        # solve the linear equation for u, then ask the engine
        lin = fam.integrability_residual(base, pt.with_u(1)) - fam.integrability_residual(base, pt)
        if not lin:
            continue
        u = -fam.integrability_residual(base, pt) / lin
        good = pt.with_u(u)
        if not good.is_admissible():
            continue
        assert fam.deform_coframe(base, good).complex_structure().integrable
        assert not fam.deform_coframe(base, good.with_u(u + 1), check=False).complex_structure().integrable


def test_integrability_bracket_is_residual_expansion():
    base = SKTFrame.symbolic()
    pt = DeformationPoint.symbolic()
    assert fam.integrability_bracket(base, pt) == fam.integrability_residual(base, pt)


def test_iwasawa_special_case():
    rng = random.Random(4)
    iwa = SKTFrame(E=1)
    for _ in range(20):
        a, b, c, f = (fam.random_gauss(rng, 3) for _ in range(4))
        pt = DeformationPoint(a, b, c, f)
        assert fam.integrability_residual(iwa, pt.with_u(b * c - a * f)) == 0


def test_gamma_display_matches_engine_with_b_term():
    rng = random.Random(6)
    G, H = fam.random_skt_base(rng, 1)
    pt = DeformationPoint(*[fam.random_gauss(rng, 2) for _ in range(4)])
    g5, g6 = fam.gamma_coeffs(G, H, pt)[4:]
    u = -(g6 / g5.conj())
    good = pt.with_u(u)
    assert fam.deform_coframe(SKTFrame.normal_form(1, G, H), good).complex_structure().integrable
    g5p, g6p = fam.gamma_coeffs(G, H, pt, drop_b=True)[4:]
    bad = pt.with_u(-(g6p / g5p.conj()))
    assert not fam.deform_coframe(SKTFrame.normal_form(1, G, H), bad, check=False).complex_structure().integrable


def test_double_cross_rho0_quartic_misses_skt_points():
    rng = random.Random(12)
    hits = 0
    for _ in range(5):
        found = fam.on_surface_point(rng, 0)
        assert found is not None
        G, H, p = found
        res = fam.oracle_point(0, G, H, *p)
        assert res.residual == 0 and res.skt
        coeffs = fam.delta_coeffs(G, H, DeformationPoint(*p))
        hits += fam.quartic_delta(coeffs, double_cross=True) == 0
    assert hits == 0


@pytest.mark.parametrize("rho", [0, 1])
def test_on_surface_points_are_skt(rho):
    rng = random.Random(30 + rho)
    for _ in range(5):
        G, H, p = fam.on_surface_point(rng, rho)
        r = fam.oracle_point(rho, G, H, *p)
        assert r.residual == 0 and r.integrable and r.skt and r.agrees


def test_hypersurface_requires_skt_base():
    with pytest.raises(ValueError):
        fam.hypersurface_eval(1, 0, 0, 0, 0, 0, 0)
    with pytest.raises(ValueError):
        fam.hypersurface_eval(2, 0, 0, 0, 0, 0, 0)


def test_origin():
    r = fam.oracle_point(1, Scalar.const(0), Scalar.const(Q(1, 2), 1), 0, 0, 0, 0)
    assert r.residual == 0 and r.skt
    # for rho = 0 the elimination of u divides by delta_5, which vanishes at the origin
    r = fam.oracle_point(0, Scalar.const(0), Scalar.const(0, 1), 0, 0, 0, 0)
    assert r.skipped == "delta_5 = 0"


@pytest.mark.parametrize("rho", [0, 1])
def test_hypersurface_is_real_quartic_in_coefficients(rho):
    G, H = Scalar.const(1), Scalar.const(Q(rho + 1, 2), 1)
    poly = fam.hypersurface_polynomial(rho, G, H)
    assert poly.is_real()
    # homogeneous of degree 4 in the eliminated coefficients
    k = symbols("k1 k2 k3 k4 k5 k6")
    quartic = fam.quartic_gamma if rho == 1 else fam.quartic_delta
    q = quartic(k)
    t = Scalar.symbol("t", real=True)
    assert quartic([x * t for x in k]) == q * t**4


def test_seeded_points_reproducible():
    assert fam.seeded_points(5, 3) == fam.seeded_points(5, 3)


def test_scan_parallel_matches_serial():
    G, H = Scalar.const(0), Scalar.const(Q(1, 2), 1)
    pts = fam.seeded_points(2, 4, height=2)
    assert fam.scan(1, G, H, pts) == fam.scan(1, G, H, pts, workers=2)


def test_weighted_condition_polynomial_matches_direct_check():
    d = fam.derive_astheno_condition(weights=[2, 3, 4, 5])
    a = {f"a{k}": 0 for k in range(1, 13)}
    for point, expected in (({"a1": 1, "a2": 1, "a3": 1, "a8": 1}, False), ({"a3": 4, "a4": 4, "a11": 4, "a12": 4}, True),
                            ({"a3": 2, "a5": 2, "a10": 2, "a12": 2}, True)):
        vals = {**a, **point}
        assert (d.polynomial.evaluate(vals) == 0) == expected
        assert fam.weighted_metric_astheno(Family8(point), [2, 3, 4, 5]) == expected
        assert Family8(point).metric().check_condition("astheno").holds
