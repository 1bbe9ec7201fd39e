"""End-to-end acceptance checks; ``pytest`` prints one PASS/FAIL line per criterion."""

import random
from dataclasses import replace

import pytest

import test_properties as props
from asthenolab import catalog
from asthenolab import connections as C
from asthenolab import families as fam
from asthenolab.families import DeformationPoint, Family8, SKTFrame
from asthenolab.forms import Form
from asthenolab.hermitian import HermitianStructure
from asthenolab.scalar import PI, Q, Scalar
from asthenolab.twist import build_twist, check_twist_conditions, flat_example, twist_torsion_identities

acceptance = pytest.mark.acceptance


def E(*ix):
    return Form.e(6, *ix)


# ---------------------------------------------------------------- 1
@acceptance(1, "derived astheno polynomial of the 8-dimensional family")
def test_derived_family_polynomial(record_property):
    d = fam.derive_astheno_condition()
    assert d.polynomial == fam.astheno_condition_expected()
    record_property("detail", f"raw = {d.factor} * polynomial")


# ---------------------------------------------------------------- 2
@acceptance(2, "explicit 8-dimensional algebra is astheno and not SKT")
def test_explicit_astheno_algebra():
    hs = catalog.get("astheno-8d").hermitian
    assert hs.g == [[Scalar.const(int(i == j)) for j in range(8)] for i in range(8)]
    assert hs.cs.integrable
    assert hs.check_condition("astheno").holds
    assert not hs.check_condition("skt").holds


# ---------------------------------------------------------------- 3
@acceptance(3, "family point a3 = a5 = a10 = a12 = 2: ddbar F^k = 0 for k = 1, 2, 3")
def test_special_point():
    hs = Family8({"a3": 2, "a5": 2, "a10": 2, "a12": 2}).metric()
    assert hs.check_condition("special").holds
    assert hs.check_condition("astheno").holds
    for k in (1, 2, 3):
        assert not hs.ddbar_F_power(k)


# ---------------------------------------------------------------- 4
@acceptance(4, "weighted metric (2,3,4,5) is not astheno")
def test_weighted_metric(record_property):
    point = Family8({"a1": 1, "a2": 1, "a3": 1, "a8": 1})
    assert point.metric().check_condition("astheno").holds
    assert not point.metric([2, 3, 4, 5]).check_condition("astheno").holds
    weighted = fam.derive_astheno_condition(weights=[2, 3, 4, 5]).polynomial
    assert weighted != fam.astheno_condition_expected()
    record_property("detail", "witness a1 = a2 = a3 = a8 = 1")


# ---------------------------------------------------------------- 5
def _skt_frames(rng, count):
    # half generic, half forced onto the SKT locus through B
    out = []
    for k in range(count):
        A, C_, D, E_ = (fam.random_gauss(rng, 3) for _ in range(4))
        B = fam.random_gauss(rng, 3)
        if k % 2:
            C_ = C_ or Scalar.const(1)
            s = A.abs2() + D.abs2() + E_.abs2()
            B = -(s / (C_.conj() * 2))
        out.append(SKTFrame(A, B, C_, D, E_))
    return out


@acceptance(5, "SKT criterion agrees with the direct ddbar F check on 50 frames")
def test_skt_criterion(record_property):
    frames = _skt_frames(random.Random(55), 50)
    agree = 0
    for fr in frames:
        formula = fam.skt_condition(fr) == 0
        direct = HermitianStructure.diagonal(fr.complex_structure()).check_condition("skt").holds
        assert (fam.skt_condition_direct(fr) == 0) == direct
        agree += formula == direct
    on = sum(fam.skt_condition(fr) == 0 for fr in frames)
    record_property("detail", f"{agree}/50 agree, {on} on the SKT locus")
    assert agree == 50 and on >= 20


# ---------------------------------------------------------------- 6
G4_BISMUT = {
    "bismut.omega[1,2]": -E(3) + E(4),
    "bismut.omega[5,6]": -E(4) * (PI * Q(1, 2)),
    "bismut.tau[1]": E(2, 3),
    "bismut.tau[2]": -E(1, 3),
    "bismut.tau[3]": E(1, 2),
    "bismut.Omega[1,2]": -E(1, 2),
    "bismut.trRR": Form.zero(6),
}
G4_CHERN = {
    "chern.Omega[1,2]": E(1, 2) * Q(1, 2),
    "chern.Omega[3,4]": -E(1, 2) * Q(1, 2),
    "chern.Omega[5,6]": -E(1, 2),
    "chern.trJR[1,2]": -PI,
}


@acceptance(6, "connection data on g4")
@pytest.mark.parametrize("table", [G4_BISMUT, G4_CHERN], ids=["bismut", "chern"])
def test_g4_connections(table, record_property):
    probe = catalog.Prober(catalog.get("g4").hermitian)
    got = {k: probe(k) for k in table}
    wrong = {k: str(v) for k, v in got.items() if v != table[k]}
    if wrong:
        record_property("detail", "engine " + ", ".join(f"{k} = {v}" for k, v in wrong.items()))
    assert not wrong


# ---------------------------------------------------------------- 7
@acceptance(7, "g1..g5 have closed JdF and closed Lee form; JdF on g5")
@pytest.mark.parametrize("name", ["g1", "g2", "g3", "g4", "g5"])
def test_g_conditions(name):
    hs = catalog.get(name).hermitian
    probe = catalog.Prober(hs)
    assert not probe("d_JdF")
    assert not probe("d_lee")
    assert hs.check_condition("lcb").holds


@acceptance(7, "g1..g5 have closed JdF and closed Lee form; JdF on g5")
def test_g5_JdF(record_property):
    got = catalog.Prober(catalog.get("g5").hermitian)("JdF")
    expected = E(1, 2, 3) * 2 + E(1, 2, 4) * 2
    if got != expected:
        record_property("detail", f"g5 engine JdF = {got}")
    assert got == expected


# ---------------------------------------------------------------- 8
def _deformation_results(rho, seed, count=100):
    # half exact on-surface points, half generic; inadmissible draws are discarded
    rng = random.Random(seed)
    results, dropped = [], 0
    while len(results) < count // 2:
        found = fam.on_surface_point(rng, rho)
        if found:
            G, H, p = found
            results.append(fam.oracle_point(rho, G, H, *p))
    generic = iter(fam.seeded_points(seed, 10 * count, height=4))
    while len(results) < count:
        G, H = fam.random_skt_base(rng, rho)
        r = fam.oracle_point(rho, G, H, *next(generic))
        if r.skipped == "inadmissible":
            dropped += 1
            continue
        results.append(r)
    return results, dropped


@acceptance(8, "hypersurface residual versus engine SKT verdict, 100 points per rho")
@pytest.mark.parametrize("rho", [0, 1])
def test_deformation_oracle(rho, record_property):
    results, dropped = _deformation_results(rho, 800 + rho)
    assert all(r.skipped is None for r in results)
    agree = sum(bool(r.agrees) for r in results)
    on = sum(r.residual == 0 for r in results)
    record_property("detail", f"rho={rho}: {agree}/100 agree, {on} on the hypersurface, {dropped} inadmissible draws skipped")
    assert agree == 100 and on == 50


@acceptance(8, "hypersurface residual versus engine SKT verdict, 100 points per rho")
def test_iwasawa_deformations():
    rng = random.Random(808)
    iwa = SKTFrame(E=1)
    for _ in range(20):
        a, b, c, f = (fam.random_gauss(rng, 4) for _ in range(4))
        pt = DeformationPoint(a, b, c, f)
        good = pt.with_u(b * c - a * f)
        assert fam.integrability_residual(iwa, good) == 0
        if good.is_admissible():
            assert fam.deform_coframe(iwa, good).complex_structure().integrable
        bad = pt.with_u(b * c - a * f + 1)
        assert fam.integrability_residual(iwa, bad) != 0


# ---------------------------------------------------------------- 9
@acceptance(9, "hypersurface gradient at the origin: nonzero for rho = 1, zero for rho = 0")
@pytest.mark.parametrize("rho", [0, 1])
def test_origin_gradient(rho):
    rng = random.Random(900 + rho)
    for _ in range(10):
        G, H = fam.random_skt_base(rng, rho)
        assert fam.skt_constraint(rho, G, H) == 0
        grad = fam.hypersurface_gradient_at_origin(rho, G, H)
        assert any(grad) == (rho == 1)


# ---------------------------------------------------------------- 10
@acceptance(10, "flat-base twist is SKT and astheno with the torsion identities")
def test_flat_twist():
    t = flat_example()
    assert check_twist_conditions(t).holds
    W = build_twist(t)
    hs = W.structure
    assert hs.dim == 8 and W.algebra.check_jacobi() and hs.cs.integrable
    assert hs.check_condition("skt").holds
    assert hs.check_condition("astheno").holds
    ids = twist_torsion_identities(t, W)
    assert ids.holds
    e = lambda *ix: Form.e(8, *ix)  # noqa: E731
    assert ids.c_W == e(1, 2, 7) + e(1, 2, 8) - e(3, 4, 7) + e(3, 4, 8)
    assert not ids.dc_W


# ---------------------------------------------------------------- 11
def _lee_examples(n, rng, count):
    out = []
    while len(out) < count:
        if n == 3:
            fr = SKTFrame(*[fam.random_gauss(rng, 2) for _ in range(5)])
            hs = HermitianStructure.diagonal(fr.complex_structure(), [rng.randint(1, 3) for _ in range(3)])
        else:
            vals = {f"a{k}": fam.random_gauss(rng, 2) for k in range(1, 13)}
            hs = Family8(vals).metric([rng.randint(1, 3) for _ in range(4)])
        if hs.dF:
            out.append(hs)
    return out


@acceptance(11, "Lee-form identity: LHS/RHS is one constant in n = 3 and n = 4")
@pytest.mark.parametrize("n", [3, 4])
def test_lee_identity_ratio(n, record_property):
    rng = random.Random(1100 + n)
    ratios, tensor_ratios = [], set()
    for hs in _lee_examples(n, rng, 20):
        li = C.lee_identity(hs)
        ratios.append(li.ratio)
        # same bracket with the full tensor norm of T (twice the form norm)
        alt = replace(li, torsion_norm2=li.torsion_norm2 * 2)
        if alt.rhs:
            tensor_ratios.add(str(alt.ratio))
        else:
            assert not alt.lhs
    distinct = sorted({str(r) for r in ratios})
    shown = distinct[0] if len(distinct) == 1 else f"{len(distinct)} distinct values, e.g. {', '.join(distinct[:3])}"
    record_property("detail", f"n={n}: ratio {shown}; tensor-norm ratio {', '.join(sorted(tensor_ratios))}")
    assert None not in ratios
    assert len(distinct) == 1


# ---------------------------------------------------------------- 12
PROPERTY_SUITE = [
    props.test_d_squared_is_zero,
    props.test_del_and_delbar_square_to_zero_and_anticommute,
    props.test_graded_leibniz,
    props.test_star_star_is_plus_minus_identity,
    props.test_star_pairs_with_inner_product,
    props.test_lefschetz_bracket_on_primitive_forms,
    props.test_levi_civita_axioms,
    props.test_bismut_axioms,
    props.test_chern_axioms,
    props.test_canonical_line,
]


@acceptance(12, "fuzzed property suites (100 cases each)")
@pytest.mark.parametrize("prop", PROPERTY_SUITE, ids=lambda f: f.__name__.removeprefix("test_"))
def test_property_suite(prop):
    prop()
