import pytest

from asthenolab import catalog
from asthenolab.forms import Form
from asthenolab.twist import (
    TwistError,
    TwistInput,
    build_twist,
    check_twist_conditions,
    flat_base,
    flat_example,
    twist_torsion_identities,
)


def E(*ix):
    return Form.e(6, *ix)


def test_flat_example_builds_skt_astheno():
    t = flat_example()
    assert check_twist_conditions(t).holds
    W = build_twist(t)
    hs = W.structure
    assert hs.dim == 8
    assert W.algebra.check_jacobi() and hs.cs.integrable
    assert hs.check_condition("skt").holds
    assert hs.check_condition("astheno").holds
    ids = twist_torsion_identities(t, W)
    assert ids.holds


def test_quadratic_condition_detects_weighted_gamma():
    t = flat_example([[1, 0], [0, 2]])
    rep = check_twist_conditions(t)
    assert not rep.quadratic_holds
    om1, om2 = t.omegas
    assert rep.quadratic == om1.wedge(om1) + om2.wedge(om2) * 2


def test_non_square_determinant_is_refused():
    with pytest.raises(TwistError):
        build_twist(flat_example([[1, 0], [0, 2]]))


@pytest.mark.parametrize("gamma", [[[2, 1], [1, 1]], [[5, 3], [3, 2]], [[2, 0], [0, 8]]])
def test_identities_hold_for_general_gamma(gamma):
    t = flat_example(gamma)
    ids = twist_torsion_identities(t, build_twist(t))
    assert ids.holds
    assert not check_twist_conditions(t).quadratic_holds


def test_identities_with_torsion_on_base():
    base = catalog.get("h2").hermitian
    # closed (1,1)-forms on h2: e12 and e34
    t = TwistInput(base, (E(1, 2), E(3, 4)))
    W = build_twist(t)
    ids = twist_torsion_identities(t, W)
    assert ids.holds
    assert ids.c_W == ids.c_W_expected


def test_input_validation():
    base = flat_base()
    with pytest.raises(TwistError):
        TwistInput(base, (E(1, 3), E(1, 2)))  # not (1,1)
    with pytest.raises(TwistError):
        TwistInput(base, (E(1, 2), E(3, 4)), [[1, 2], [2, 1]])  # not positive
    with pytest.raises(TwistError):
        TwistInput(catalog.get("h2").hermitian, (E(1, 5) + E(2, 6), E(1, 2)))  # not closed
    with pytest.raises(TwistError):
        TwistInput(catalog.get("astheno-8d").hermitian, (E(1, 2), E(3, 4)))


def test_xi_flat_is_metric_dual():
    t = flat_example([[2, 1], [1, 1]])
    W = build_twist(t)
    g = W.structure.g
    for v, flat in zip(W.xi, W.xi_flat):
        expected = Form.one_form([sum((v[i] * g[i][j] for i in range(8)), g[0][0] * 0) for j in range(8)])
        assert flat == expected
