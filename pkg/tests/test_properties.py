"""Fuzzed identities of the exterior, complex and metric kernels (100 cases each)."""

from hypothesis import given
from hypothesis import strategies as st

from asthenolab import connections as C
from asthenolab.forms import Form
from asthenolab.linalg import matvec
from asthenolab.scalar import Scalar
from strategies import forms, hermitian_structures


def _form(data, dim, degree=None, max_terms=3):
    return data.draw(forms(dim, degree, max_terms))


@given(hermitian_structures, st.data())
def test_d_squared_is_zero(hs, data):
    alg = hs.cs.algebra
    a = _form(data, alg.dim)
    assert not alg.d(alg.d(a))


@given(hermitian_structures, st.data())
def test_del_and_delbar_square_to_zero_and_anticommute(hs, data):
    cs = hs.cs
    a = _form(data, hs.dim)  # components in the complex coframe
    assert not cs.del_(cs.del_(a))
    assert not cs.delbar(cs.delbar(a))
    assert cs.del_(cs.delbar(a)) == -cs.delbar(cs.del_(a))


@given(hermitian_structures, st.data())
def test_graded_leibniz(hs, data):
    alg = hs.cs.algebra
    p = data.draw(st.integers(0, 3))
    a = _form(data, alg.dim, p)
    b = _form(data, alg.dim)
    sign = 1 if p % 2 == 0 else -1
    assert alg.d(a.wedge(b)) == alg.d(a).wedge(b) + a.wedge(alg.d(b)) * sign


@given(hermitian_structures, st.data())
def test_star_star_is_plus_minus_identity(hs, data):
    N = hs.dim
    p = data.draw(st.integers(0, N))
    a = _form(data, N, p)
    sign = 1 if (p * (N - p)) % 2 == 0 else -1
    assert hs.hodge_star(hs.hodge_star(a)) == a * sign


@given(hermitian_structures, st.data())
def test_star_pairs_with_inner_product(hs, data):
    N = hs.dim
    p = data.draw(st.integers(0, N))
    a, b = _form(data, N, p), _form(data, N, p)
    vol = Form.e(N, *range(1, N + 1)) * hs.volume_scale
    assert a.wedge(hs.hodge_star(b)) == vol * hs.inner(a, b)


def _primitive_part(hs, a: Form, p: int) -> Form:
    n = hs.n
    if p == 2:
        return a - hs.F * (hs.lefschetz_Lstar(a).scalar_part() / n)
    if p == 3:
        return a - hs.lefschetz_L(hs.lefschetz_Lstar(a)) / (n - 1)
    return a


@given(hermitian_structures, st.data())
def test_lefschetz_bracket_on_primitive_forms(hs, data):
    n = hs.n
    p = data.draw(st.integers(0, 3))
    a = _primitive_part(hs, _form(data, hs.dim, p), p)
    L, Ls = hs.lefschetz_L, hs.lefschetz_Lstar
    assert not Ls(a)
    assert Ls(L(a)) - L(Ls(a)) == a * (n - p)


@given(hermitian_structures)
def test_levi_civita_axioms(hs):
    lc = C.levi_civita(hs)
    assert lc.is_metric() and lc.is_torsion_free()
    assert lc == C.koszul(hs)


@given(hermitian_structures)
def test_bismut_axioms(hs):
    b = C.bismut(hs)
    assert b.is_metric() and b.preserves_J()
    assert b.torsion_3form() == hs.torsion_c()
    assert b == C.bismut_from_torsion(hs)


@given(hermitian_structures, st.data())
def test_chern_axioms(hs, data):
    c = C.chern(hs)
    assert c.is_metric() and c.preserves_J()
    assert c == C.chern_from_dbar(hs)
    N, J = hs.dim, hs.cs.J
    a, b = data.draw(st.integers(0, N - 1)), data.draw(st.integers(0, N - 1))
    # T(J e_a, e_b) = J T(e_a, e_b): the torsion has no (1,1)-part
    lhs = [Scalar.const(0)] * N
    for m in range(N):
        if J[m][a]:
            lhs = [x + y * J[m][a] for x, y in zip(lhs, c.torsion_tensor(m, b))]
    assert lhs == matvec(J, c.torsion_tensor(a, b))


@given(hermitian_structures)
def test_canonical_line(hs):
    # t = -1 on the line through Chern (t = 1) and the first canonical connection (t = 0)
    ch, fc = C.chern(hs), C.first_canonical(hs)
    assert fc.is_metric() and fc.preserves_J()
    assert ch.combine(fc, -1, 2, "t=-1") == C.bismut(hs)
