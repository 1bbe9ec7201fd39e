import pytest
from hypothesis import given

from asthenolab import catalog
from asthenolab.dsl import DSLError, parse, parse_form, parse_scalar, to_text
from asthenolab.forms import Form
from asthenolab.lie import LieAlgebra
from asthenolab.scalar import I, PI, Q, Scalar
from strategies import forms

Z6 = Form.zero(6)


def E(n, *ix):
    return Form.e(n, *ix)


def test_salamon_tuple():
    p = parse("(0,0,0,0,e12,e34)")
    assert p.algebra == LieAlgebra([Z6] * 4 + [E(6, 1, 2), E(6, 3, 4)])


def test_astheno_algebra_tuple():
    p = parse("(0,0,0,0,0,0, 4*(e13+e24-e35-e46), 4*(e23-e14+e45-e36-2*e12-2*e56))")
    de7 = (E(8, 1, 3) + E(8, 2, 4) - E(8, 3, 5) - E(8, 4, 6)) * 4
    assert p.algebra.d_images[6] == de7
    assert p.algebra.check_jacobi()


def test_antisymmetry_normalization():
    assert parse_form("e21", 2) == -E(2, 1, 2)
    assert parse_form("e1^e10", 10) == E(10, 1, 10)


def test_block_notation_and_metric():
    p = parse("""
        algebra 6 {
          d e5 = e12;
          d e6 = e34;   # comment
        }
        metric diag(1, 1, 2, 2, 1, 1)
    """)
    hs = p.hermitian()
    assert hs.g[2][2] == 2
    assert p.algebra == parse("(0,0,0,0,e12,e34)").algebra


def test_complex_block():
    p = parse("complex { d w3 = w1^w2; }")
    assert p.complex_structure.integrable
    assert p.algebra.dim == 6
    q = parse("params a; complex { d w3 = a*w1~1 + ~w2^w1; }")
    assert "a" in q.params and q.algebra.free_symbols() == {"a", "a~"}


def test_coframe_and_jmatrix():
    txt = "(0,0,0,0,e12,e34)\ncoframe { e1 + i*e2; e3 + i*e4; e5 + i*e6; }"
    assert parse(txt).complex_structure.integrable
    j = "(0,0)\njmatrix [[0,1],[-1,0]]"
    assert parse(j).complex_structure.J == [[0, 1], [-1, 0]]


def test_scalar_expressions():
    assert parse_scalar("(1+i)*(1-i)") == Scalar.const(2)
    assert parse_scalar("-1/2*pi") == PI * Q(-1, 2)
    assert parse_scalar("3/2*i") == I * Q(3, 2)
    a = Scalar.symbol("a")
    assert parse_scalar("a~**2 + a", {"a": a}) == a.conj() ** 2 + a


@pytest.mark.parametrize(
    "text, fragment, line, col",
    [
        ("(0,e11)", "repeated index", 1, 4),
        ("(0,e13)", "out of range", 1, 4),
        ("(0,\n e12 + $)", "unexpected character", 2, 8),
        ("(0,0,e12", "unterminated", 1, 1),
        ("(0,0,e12)\ncomplex { d w1 = 0; }", "odd", 2, 1),
        ("(0, b*e12)", "undeclared parameter", 1, 5),
        ("algebra 2 { d e2 = e1; }", "2-form", None, None),
    ],
)
def test_errors_carry_position(text, fragment, line, col):
    with pytest.raises(DSLError) as exc:
        parse(text)
    assert fragment in str(exc.value)
    if line is not None:
        assert (exc.value.line, exc.value.col) == (line, col)


@pytest.mark.parametrize("name", catalog.names())
def test_catalog_round_trip(name):
    hs = catalog.get(name).hermitian
    back = parse(to_text(hs)).hermitian()
    assert back.cs.algebra == hs.cs.algebra
    assert back.cs.coframe == hs.cs.coframe
    assert back.g == hs.g
    assert to_text(back) == to_text(hs)


@given(forms(11))
def test_printed_forms_parse_back(f):
    assert parse_form(str(f) if f else "0", 11) == f
