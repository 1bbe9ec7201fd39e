"""Twists of 6-dimensional Hermitian Lie algebras by two closed (1,1)-forms.

At the Lie-algebra level the twist of ``N x T^2`` is the central extension
``d e^7 = Omega_1``, ``d e^8 = Omega_2`` with the flat metric ``gamma`` on the
new directions.  Horizontal relations between forms on the product and on
the twist become literal identities between invariant forms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .forms import Form
from .hermitian import ComplexStructure, HermitianStructure, _rational_sqrt
from .linalg import det, to_matrix
from .scalar import I, Scalar

ZERO = Scalar.const(0)


class TwistError(ValueError):
    pass


@dataclass
class TwistInput:
    """Base ``N`` (real dimension 6), closed real (1,1)-forms and the fibre metric."""

    base: HermitianStructure
    omegas: tuple[Form, Form]
    gamma: list = field(default_factory=lambda: [[1, 0], [0, 1]])

    def __post_init__(self):
        if self.base.dim != 6:
            raise TwistError("the base must be 6-dimensional")
        self.omegas = tuple(self.omegas)
        if len(self.omegas) != 2:
            raise TwistError("need exactly two forms Omega_1, Omega_2")
        self.gamma = to_matrix(self.gamma)
        g = self.gamma
        if len(g) != 2 or any(len(r) != 2 for r in g) or g[0][1] != g[1][0]:
            raise TwistError("gamma must be a symmetric 2x2 matrix")
        for x in (g[0][0], det(g)):
            re, im = x.constant()
            if im != 0 or re <= 0 or not x.is_real():
                raise TwistError("gamma must be positive definite")
        cs = self.base.cs
        for i, om in enumerate(self.omegas, 1):
            if om.dim != 6 or (om and om.degrees() != {2}):
                raise TwistError(f"Omega_{i} must be a 2-form on the base")
            if any(not c.is_real() for _, c in om.items()):
                raise TwistError(f"Omega_{i} must be real")
            if cs.algebra.d(om):
                raise TwistError(f"Omega_{i} is not closed")
            split = cs.bidegree_split(om, complex_basis=False)
            if set(split) - {(1, 1)}:
                raise TwistError(f"Omega_{i} is not of type (1,1)")

    def quadratic(self) -> Form:
        """``sum gamma_ij Omega_i ^ Omega_j``."""
        o, g = self.omegas, self.gamma
        out = Form.zero(6)
        for i in range(2):
            for j in range(2):
                if g[i][j]:
                    out = out + o[i].wedge(o[j]) * g[i][j]
        return out


@dataclass(frozen=True)
class TwistReport:
    quadratic_holds: bool
    quadratic: Form
    c_wedge_holds: tuple[bool, bool]
    c_wedge: tuple[Form, Form]

    @property
    def holds(self) -> bool:
        return self.quadratic_holds and all(self.c_wedge_holds)


def check_twist_conditions(t: TwistInput) -> TwistReport:
    q = t.quadratic()
    c = t.base.torsion_c()
    wedges = tuple(c.wedge(om) for om in t.omegas)
    return TwistReport(not q, q, tuple(not w for w in wedges), wedges)


@dataclass
class Twist:
    input: TwistInput
    structure: HermitianStructure

    @property
    def algebra(self):
        return self.structure.cs.algebra

    @property
    def xi(self) -> tuple[list, list]:
        """Generators of the torus action.

        The principal connection ``theta_i`` satisfies ``theta_i(xi_j) =
        delta_ij`` and has curvature ``-Omega_i``, so ``theta_i = -e^{6+i}``
        and ``xi_i = -e_{6+i}`` for the extension ``d e^{6+i} = Omega_i``.
        """
        return tuple([-1 if k == 6 + i else 0 for k in range(8)] for i in range(2))

    @cached_property
    def xi_flat(self) -> tuple[Form, Form]:
        """Metric duals ``xi_i^b``."""
        g = self.input.gamma
        return tuple(-(Form.e(8, 7) * g[i][0] + Form.e(8, 8) * g[i][1]) for i in range(2))

    @cached_property
    def fibre_F(self) -> Form:
        F = self.structure.F
        return Form(8, {(6, 7): F.coeff0((6, 7))})


def build_twist(t: TwistInput, name: str | None = None) -> Twist:
    """Central extension with the base structure and a ``gamma``-compatible fibre.

    The new (1,0)-form is ``p e^7 + (q + i sqrt(det gamma)) e^8`` for
    ``gamma = [[p, q], [q, r]]``, whose real and imaginary parts form a
    ``gamma``-orthonormal coframe up to the factor ``sqrt(p)``.
    """
    g = t.gamma
    root = _rational_sqrt(det(g))
    if root is None:
        raise TwistError("det(gamma) must be the square of a rational number")
    base = t.base
    algebra = base.cs.algebra.central_extension(list(t.omegas), name=name)
    coframe = [f.embed(8) for f in base.cs.coframe]
    coframe.append(Form.e(8, 7) * g[0][0] + Form.e(8, 8) * (g[0][1] + root * I))
    cs = ComplexStructure(algebra, coframe)
    metric = [[base.g[a][b] if a < 6 and b < 6 else ZERO for b in range(8)] for a in range(8)]
    for i in range(2):
        for j in range(2):
            metric[6 + i][6 + j] = g[i][j]
    return Twist(t, HermitianStructure(cs, metric))


@dataclass(frozen=True)
class TorsionReport:
    c_W: Form
    c_W_expected: Form
    c_W_holds: bool
    dc_W: Form
    dc_W_expected: Form
    dc_W_holds: bool
    xi_c_holds: bool
    xi_F_holds: bool
    omega_identity_holds: bool

    @property
    def holds(self) -> bool:
        return all((self.c_W_holds, self.dc_W_holds, self.xi_c_holds, self.xi_F_holds, self.omega_identity_holds))


def twist_torsion_identities(t: TwistInput, W: Twist) -> TorsionReport:
    """Check the torsion relations between the product and the twist.

    ``c_W = c - sum Omega_i ^ xi_i^b`` and ``d c_W = dc + sum gamma_ij
    Omega_i ^ Omega_j``; the torsion of the product has no fibre part, so
    ``i_xi c = 0``, while ``i_xi F = J xi^b`` holds on the twist.  The last
    check is the wedge identity
    ``sum Omega_i ^ Omega_j ^ xi_i^b ^ i_{xi_j} F = (sum gamma_ij Omega_i ^ Omega_j) ^ F_fibre``.
    """
    hs = W.structure
    c = t.base.torsion_c().embed(8)
    oms = [om.embed(8) for om in t.omegas]
    flat = W.xi_flat
    c_W = hs.torsion_c()
    expected = c - sum((om.wedge(x) for om, x in zip(oms, flat)), Form.zero(8))
    dc_W = W.algebra.d(c_W)
    dc_expected = t.base.cs.algebra.d(t.base.torsion_c()).embed(8) + t.quadratic().embed(8)
    xi = W.xi
    xi_c = all(not c.interior(v) for v in xi)
    xi_F = all(hs.F.interior(v) == hs.cs.J_form(x) for v, x in zip(xi, flat))
    lhs = Form.zero(8)
    for i in range(2):
        for j in range(2):
            lhs = lhs + oms[i].wedge(oms[j]).wedge(flat[i]).wedge(hs.F.interior(xi[j]))
    rhs = t.quadratic().embed(8).wedge(W.fibre_F)
    return TorsionReport(c_W, expected, c_W == expected, dc_W, dc_expected, dc_W == dc_expected,
                         xi_c, xi_F, lhs == rhs)


def flat_base() -> HermitianStructure:
    """Flat Kahler ``R^6`` with the standard structure."""
    from .lie import LieAlgebra

    return HermitianStructure.identity(ComplexStructure.standard(LieAlgebra.abelian(6, name="R6")))


def flat_example(gamma: Sequence[Sequence] | None = None) -> TwistInput:
    E = lambda *ix: Form.e(6, *ix)  # noqa: E731
    return TwistInput(flat_base(), (E(1, 2) - E(3, 4), E(1, 2) + E(3, 4)), gamma or [[1, 0], [0, 1]])
