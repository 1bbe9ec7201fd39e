"""Hypothesis strategies shared by the property suites."""

from itertools import combinations

from hypothesis import strategies as st

from asthenolab.families import Family8, SKTFrame
from asthenolab.forms import Form
from asthenolab.hermitian import HermitianStructure
from asthenolab.scalar import Q, Scalar

rationals = st.builds(lambda p, q: Q(p, q), st.integers(-6, 6), st.integers(1, 4))
gauss = st.builds(lambda a, b: Scalar.const(a, b), rationals, rationals)
small_gauss = st.builds(lambda a, b: Scalar.const(a, b), st.integers(-2, 2), st.integers(-2, 2))
weights = st.integers(1, 4)


def forms(dim: int, degree: int | None = None, max_terms: int = 4):
    """Random forms with Gaussian-rational coefficients."""
    if degree is None:
        monos = [c for p in range(dim + 1) for c in combinations(range(dim), p)]
    else:
        monos = list(combinations(range(dim), degree))
    return st.lists(st.tuples(st.sampled_from(monos), gauss), max_size=max_terms).map(
        lambda items: sum((Form(dim, {k: c}) for k, c in items), Form.zero(dim))
    )


@st.composite
def skt_frames(draw):
    """Hermitian structures on 2-step nilpotent algebras of real dimension 6."""
    fr = SKTFrame(*[draw(small_gauss) for _ in range(5)])
    w = [draw(weights) for _ in range(3)]
    return HermitianStructure.diagonal(fr.complex_structure(), w)


@st.composite
def family8_structures(draw):
    vals = {f"a{k}": draw(small_gauss) for k in range(1, 13)}
    return Family8(vals).metric([draw(weights) for _ in range(4)])


hermitian_structures = st.one_of(skt_frames(), skt_frames(), family8_structures())
