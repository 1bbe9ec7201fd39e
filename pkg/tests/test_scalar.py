import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from asthenolab.scalar import I, PI, Q, Scalar, as_scalar, symbols
from oracles import to_sympy
from strategies import gauss

a, b = symbols("a b")
t = Scalar.symbol("t", real=True)
poly_atoms = st.sampled_from([a, b, a.conj(), t, PI, I, Scalar.const(1)])
polys = st.lists(st.tuples(gauss, st.lists(poly_atoms, max_size=3)), max_size=4).map(
    lambda terms: sum((c * _prod(m) for c, m in terms), Scalar.const(0))
)


def _prod(items):
    out = Scalar.const(1)
    for x in items:
        out = out * x
    return out


@given(polys, polys)
def test_ring_ops_match_sympy(x, y):
    assert to_sympy(x + y) == sp.expand(to_sympy(x) + to_sympy(y))
    assert to_sympy(x * y) == sp.expand(to_sympy(x) * to_sympy(y))
    assert to_sympy(x - y) == sp.expand(to_sympy(x) - to_sympy(y))


@given(polys)
def test_conj_matches_sympy(x):
    assert to_sympy(x.conj()) == sp.expand(sp.conjugate(to_sympy(x)))
    assert x.conj().conj() == x


@given(polys)
def test_re_im_parts(x):
    assert x.re() + x.im() * I == x
    assert x.re().is_real() and x.im().is_real()
    assert to_sympy(x.abs2()) == sp.expand(to_sympy(x) * sp.conjugate(to_sympy(x)))


@given(gauss.filter(bool), gauss)
def test_division(x, y):
    assert (y / x) * x == y


def test_printing():
    assert str(Scalar.const(Q(1, 2))) == "1/2"
    assert str(Scalar.const(Q(1, 2), Q(-3, 4))) == "1/2-3/4*i"
    assert str(PI * Q(-1, 2)) == "(-1/2)*pi"
    assert str(a.conj()) == "a~"
    assert str(Scalar.const(0)) == "0"


def test_real_symbols_are_self_conjugate():
    assert t.conj() == t
    assert PI.conj() == PI
    assert a.conj() != a


def test_evaluate_checks_conjugate_consistency():
    x = a * a.conj()
    assert x.evaluate({"a": Scalar.const(1, 2)}) == Scalar.const(5)


def test_diff():
    x = a**2 * a.conj() + b
    assert x.diff("a") == a * a.conj() * 2
    assert x.diff("a~") == a**2


def test_as_scalar_rejects_junk():
    with pytest.raises(TypeError):
        as_scalar("x")
