import pytest
from hypothesis import given
from hypothesis import strategies as st

from asthenolab.forms import Form
from asthenolab.lie import LieAlgebra, NotClosed
from oracles import ce_differential_value
from strategies import family8_structures, forms, skt_frames


def E(n, *ix):
    return Form.e(n, *ix)


algebras = st.one_of(skt_frames(), family8_structures()).map(lambda hs: hs.cs.algebra)


@given(algebras, st.data())
def test_d_matches_chevalley_eilenberg(alg, data):
    a = data.draw(forms(alg.dim, data.draw(st.integers(1, 3)), max_terms=3))
    da = alg.d(a)
    for key, c in da.items():
        assert c == ce_differential_value(alg, a, key)
    # and no missing components: sample a few indices
    for key in [(0, 1), (0, 2, 4), (1, 3, 5)]:
        if len(key) == (a.degree() if a else 0) + 1:
            assert da.coeff0(key) == ce_differential_value(alg, a, key)


def test_bracket_convention():
    h = LieAlgebra([Form.zero(6)] * 4 + [E(6, 1, 2), E(6, 3, 4)])
    e1 = [1, 0, 0, 0, 0, 0]
    e2 = [0, 1, 0, 0, 0, 0]
    assert h.bracket(e1, e2) == [0, 0, 0, 0, -1, 0]


def test_jacobi_failure_is_reported():
    bad = LieAlgebra([Form.zero(5), Form.zero(5), E(5, 1, 2), E(5, 1, 3), E(5, 3, 4)])
    v = bad.check_jacobi()
    assert not v and v.index == 4


def test_central_extension_requires_closed():
    h = LieAlgebra([Form.zero(4), Form.zero(4), E(4, 1, 2), Form.zero(4)])
    with pytest.raises(NotClosed):
        h.central_extension([E(4, 3, 4)])
    ext = h.central_extension([E(4, 1, 4)])
    assert ext.dim == 5 and ext.check_jacobi()
    assert ext.truncate(4) == h


def test_nilpotent_basis():
    assert LieAlgebra([Form.zero(3), Form.zero(3), E(3, 1, 2)]).is_nilpotent_in_basis()
    so3 = LieAlgebra([E(3, 2, 3), -E(3, 1, 3), E(3, 1, 2)])
    assert so3.check_jacobi() and not so3.is_nilpotent_in_basis()
