"""Complex structures, bidegree calculus and Hermitian metric conditions.

Conventions
-----------
* ``J`` is stored as a matrix acting on frame vectors:
  ``J e_i = sum_k J[k][i] e_k``.
* A (1,0)-form ``eta`` satisfies ``eta(JX) = i eta(X)``.
* ``J`` acts on a p-form by ``(J a)(X_1..X_p) = (-1)^p a(JX_1, .., JX_p)``, so
  the Bismut torsion ``c = -J dF`` equals ``dF(J., J., J.)``.
* ``F(X, Y) = g(JX, Y)``.
* Forms on ``2n`` real dimensions are converted to the complex coframe
  ``(eta^1..eta^n, conj eta^1..conj eta^n)``; bidegree is read off the indices.
* The pointwise inner product on p-forms makes ``e^I`` orthonormal for an
  orthonormal coframe (determinant normalization); ``L*`` is its adjoint.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import isqrt
from typing import Sequence

from .forms import Form, canonical
from .lie import LieAlgebra
from .linalg import (
    SingularMatrix,
    det,
    identity,
    inverse,
    mat_eq,
    matmul,
    nullspace,
    to_matrix,
    transpose,
)
from .scalar import Q, Scalar, as_scalar

CONDITIONS = ("kahler", "skt", "astheno", "special", "standard", "balanced", "lcb")

I_ = Scalar.const(0, 1)


class NotIntegrable(ValueError):
    pass


class MetricError(ValueError):
    pass


@dataclass(frozen=True)
class IntegrabilityVerdict:
    holds: bool
    index: int | None = None  # 0-based (1,0)-form index
    witness: Form | None = None  # (0,2)-part of d eta^j, complex coframe

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class ConditionVerdict:
    kind: str
    holds: bool
    witness: Form | None = None  # residual form, complex coframe unless noted
    detail: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.holds


def _rational_sqrt(x: Scalar) -> Scalar | None:
    re, im = x.constant()
    if im != 0 or re < 0:
        return None
    n, d = int(re.numerator), int(re.denominator)
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Scalar.const(Q(rn, rd))
    return None


class ComplexStructure:
    """An almost complex structure on a Lie algebra, given by a (1,0)-coframe."""

    def __init__(self, algebra: LieAlgebra, coframe: Sequence[Form]):
        if algebra.dim % 2:
            raise ValueError("a complex structure needs an even-dimensional algebra")
        self.algebra = algebra
        self.n = algebra.dim // 2
        coframe = list(coframe)
        if len(coframe) != self.n:
            raise ValueError(f"need {self.n} (1,0)-forms, got {len(coframe)}")
        for f in coframe:
            if f.dim != algebra.dim or (f and f.degrees() != {1}):
                raise ValueError("coframe entries must be 1-forms on the algebra")
        self.coframe = tuple(coframe)
        N = algebra.dim
        rows = [[f.coeff0((k,)) for k in range(N)] for f in coframe]
        self.P = rows + [[x.conj() for x in row] for row in rows]
        try:
            self.Pinv = inverse(self.P)
        except SingularMatrix as exc:
            raise ValueError(f"coframe and its conjugate do not span the dual space: {exc}") from None
        self.swap = [(m + self.n) % N for m in range(N)]
        self._theta_in_e = [Form.one_form(row) for row in self.P]
        self._e_in_theta = [Form.one_form(row) for row in self.Pinv]

    # ---------------------------------------------------------- builders
    @classmethod
    def from_matrix(cls, algebra: LieAlgebra, J: Sequence[Sequence]) -> "ComplexStructure":
        """Coframe of +i eigen-forms of a parameter-free ``J``."""
        J = to_matrix(J)
        N = algebra.dim
        minus = [[-x for x in row] for row in identity(N)]
        if not mat_eq(matmul(J, J), minus):
            raise ValueError("J does not square to -1")
        # row vectors r with r J = i r  <=>  (J - i)^T r^T = 0
        shifted = [[J[r][c] - (I_ if r == c else 0) for c in range(N)] for r in range(N)]
        basis = nullspace(transpose(shifted))
        basis = sorted(basis, key=lambda v: next(k for k, x in enumerate(v) if x))
        # scale so that each leading entry is 1
        coframe = []
        for v in basis:
            lead = next(x for x in v if x)
            inv = lead.inverse()
            coframe.append(Form.one_form([x * inv for x in v]))
        return cls(algebra, coframe)

    @classmethod
    def from_equations(cls, d_eta: Sequence[Form], name: str | None = None) -> "ComplexStructure":
        """Build the real algebra from complex structure equations.

        ``d_eta[j]`` is ``d eta^{j+1}`` written in the complex coframe of
        dimension ``2n`` (indices ``< n`` are eta, the rest conj eta); the real
        frame is fixed by ``eta^j = e^{2j-1} + i e^{2j}``.
        """
        n = len(d_eta)
        N = 2 * n
        swap = [(m + n) % N for m in range(N)]
        dtheta = list(d_eta) + [f.conjugate(swap) for f in d_eta]
        # e^{2j-1} = (eta^j + conj eta^j)/2, e^{2j} = (eta^j - conj eta^j)/(2i)
        half = Scalar.const(Q(1, 2))
        e_in_theta = []
        for j in range(n):
            e_in_theta.append(Form(N, {(j,): half, (j + n,): half}))
            e_in_theta.append(Form(N, {(j,): Scalar.const(0, Q(-1, 2)), (j + n,): Scalar.const(0, Q(1, 2))}))
        theta_in_e = []
        for j in range(n):
            theta_in_e.append(Form(N, {(2 * j,): 1, (2 * j + 1,): I_}))
        for j in range(n):
            theta_in_e.append(Form(N, {(2 * j,): 1, (2 * j + 1,): -I_}))
        real_d = []
        for k in range(N):
            acc = Form.zero(N)
            for (m,), coef in e_in_theta[k].items():
                acc = acc + dtheta[m] * coef
            real_d.append(acc.pullback(theta_in_e))
        for k, f in enumerate(real_d):
            if f != f.conjugate():
                raise ValueError(f"structure equations do not define a real algebra (d e^{k + 1} = {f})")
        algebra = LieAlgebra(real_d, name=name)
        return cls(algebra, theta_in_e[:n])

    @classmethod
    def standard(cls, algebra: LieAlgebra) -> "ComplexStructure":
        """``eta^j = e^{2j-1} + i e^{2j}``."""
        N = algebra.dim
        return cls(algebra, [Form(N, {(2 * j,): 1, (2 * j + 1,): I_}) for j in range(N // 2)])

    # ---------------------------------------------------------- basics
    @cached_property
    def J(self) -> list:
        N = self.algebra.dim
        D = [[Scalar.const(0)] * N for _ in range(N)]
        for m in range(N):
            D[m][m] = I_ if m < self.n else -I_
        return matmul(matmul(self.Pinv, D), self.P)

    @cached_property
    def calg(self) -> LieAlgebra:
        """The complexified algebra written in the complex coframe."""
        N = self.algebra.dim
        images = []
        for row in self.P:
            acc = Form.zero(N)
            for k, coef in enumerate(row):
                if coef:
                    acc = acc + self.algebra.d_images[k] * coef
            images.append(acc.pullback(self._e_in_theta))
        return LieAlgebra(images, name=(self.algebra.name or "") + "_C")

    def to_complex(self, a: Form) -> Form:
        return a.pullback(self._e_in_theta)

    def to_real(self, a: Form) -> Form:
        return a.pullback(self._theta_in_e)

    def bar(self, a: Form) -> Form:
        """Complex conjugation of a form written in the complex coframe."""
        return a.conjugate(self.swap)

    def eta(self, j: int) -> Form:
        """The complex-coframe 1-form eta^j (1-based); ``-j`` gives conj eta^j."""
        N = self.algebra.dim
        idx = j - 1 if j > 0 else -j - 1 + self.n
        return Form(N, {(idx,): 1})

    def bidegree(self, idx: tuple) -> tuple[int, int]:
        p = sum(1 for i in idx if i < self.n)
        return p, len(idx) - p

    def bidegree_split(self, a: Form, *, complex_basis: bool = True) -> dict:
        """Split into (p,q) components; input in the complex coframe unless told otherwise."""
        if not complex_basis:
            a = self.to_complex(a)
        parts: dict = {}
        for k, c in a.items():
            parts.setdefault(self.bidegree(k), {})[k] = c
        N = self.algebra.dim
        return {pq: Form._raw(N, t) for pq, t in sorted(parts.items())}

    def J_vector(self, v: Sequence) -> list:
        N = self.algebra.dim
        return [sum((self.J[k][i] * as_scalar(v[i]) for i in range(N) if self.J[k][i]), Scalar.const(0)) for k in range(N)]

    def J_form(self, a: Form) -> Form:
        """``(J a)(X_1..X_p) = (-1)^p a(JX_1..JX_p)`` on a real-frame form."""
        N = self.algebra.dim
        rows = [Form.one_form(self.J[k]) for k in range(N)]
        out = Form.zero(N)
        for p in sorted(a.degrees()):
            comp = a.component(p).pullback(rows)
            out = out + (comp if p % 2 == 0 else -comp)
        return out

    def free_symbols(self) -> set[str]:
        out = set(self.algebra.free_symbols())
        for f in self.coframe:
            out |= f.free_symbols()
        return out

    # ---------------------------------------------------------- integrability
    def check_integrable(self) -> IntegrabilityVerdict:
        n = self.n
        for j in range(n):
            d_eta = self.calg.d_images[j]
            bad = {k: c for k, c in d_eta.items() if all(i >= n for i in k)}
            if bad:
                return IntegrabilityVerdict(False, j, Form._raw(self.algebra.dim, bad))
        return IntegrabilityVerdict(True)

    @cached_property
    def integrable(self) -> bool:
        return self.check_integrable().holds

    def _require_integrable(self) -> None:
        if not self.integrable:
            v = self.check_integrable()
            raise NotIntegrable(f"J is not integrable: (0,2)-part of d eta^{v.index + 1} is {v.witness}")

    # ---------------------------------------------------------- Dolbeault
    def d(self, a: Form) -> Form:
        """Exterior derivative in the complex coframe."""
        return self.calg.d(a)

    def _d_part(self, a: Form, dp: int, dq: int) -> Form:
        out: dict = {}
        for (p, q), comp in self.bidegree_split(a).items():
            for k, c in self.calg.d(comp).items():
                if self.bidegree(k) == (p + dp, q + dq):
                    old = out.get(k)
                    out[k] = c if old is None else old + c
        return Form._raw(self.algebra.dim, {k: v for k, v in out.items() if v})

    def del_(self, a: Form) -> Form:
        self._require_integrable()
        return self._d_part(a, 1, 0)

    def delbar(self, a: Form) -> Form:
        self._require_integrable()
        return self._d_part(a, 0, 1)

    def ddbar(self, a: Form) -> Form:
        return self.del_(self.delbar(a))

    # ---------------------------------------------------------- evaluation
    def evaluate(self, assignment) -> "ComplexStructure":
        return ComplexStructure(self.algebra.evaluate(assignment), [f.evaluate(assignment) for f in self.coframe])

    def format_complex(self, a: Form) -> str:
        """Print a complex-coframe form as ``w``/``~w`` monomials."""
        if not a:
            return "0"
        parts = []
        for k in sorted(a.terms, key=lambda k: (len(k), k)):
            mono = "^".join(f"w{i + 1}" if i < self.n else f"~w{i - self.n + 1}" for i in k) or "1"
            c = a.terms[k]
            cs = str(c)
            parts.append(f"({cs})*{mono}" if len(c.terms) > 1 or not k else f"{cs}*{mono}")
        return " + ".join(parts)


class HermitianStructure:
    """A complex structure together with a compatible metric ``g`` on the frame."""

    def __init__(self, cs: ComplexStructure, metric: Sequence[Sequence], *, check: bool = True):
        self.cs = cs
        self.g = to_matrix(metric)
        self.n = cs.n
        self.dim = cs.algebra.dim
        if check:
            self._validate()

    def _validate(self) -> None:
        g, N = self.g, self.dim
        if len(g) != N or any(len(r) != N for r in g):
            raise MetricError("metric has the wrong shape")
        for a in range(N):
            for b in range(a + 1, N):
                if g[a][b] != g[b][a]:
                    raise MetricError("metric is not symmetric")
        J = self.cs.J
        if not mat_eq(matmul(matmul(transpose(J), g), J), g):
            raise MetricError("metric is not J-invariant")
        if all(x.is_constant() for row in g for x in row):
            for k in range(1, N + 1):
                m = det([row[:k] for row in g[:k]])
                re, im = m.constant()
                if im != 0 or re <= 0:
                    raise MetricError("metric is not positive definite")

    # ---------------------------------------------------------- builders
    @classmethod
    def from_hermitian_matrix(cls, cs: ComplexStructure, h: Sequence[Sequence]) -> "HermitianStructure":
        """``g = Re sum h_jk eta^j (x) conj eta^k`` for a Hermitian matrix ``h``."""
        h = to_matrix(h)
        n, N = cs.n, cs.algebra.dim
        P = cs.P[:n]
        g = [[Scalar.const(0)] * N for _ in range(N)]
        for a in range(N):
            for b in range(N):
                s = Scalar.const(0)
                for j in range(n):
                    for k in range(n):
                        if h[j][k] and P[j][a] and P[k][b]:
                            s = s + h[j][k] * P[j][a] * P[k][b].conj()
                g[a][b] = s.re()
        return cls(cs, g)

    @classmethod
    def diagonal(cls, cs: ComplexStructure, weights: Sequence | None = None) -> "HermitianStructure":
        """``g = 1/2 sum w_j (eta^j (x) conj eta^j + conj eta^j (x) eta^j)``."""
        n = cs.n
        weights = [1] * n if weights is None else list(weights)
        if len(weights) != n:
            raise ValueError(f"need {n} weights")
        h = [[weights[j] if j == k else 0 for k in range(n)] for j in range(n)]
        return cls.from_hermitian_matrix(cs, h)

    @classmethod
    def identity(cls, cs: ComplexStructure) -> "HermitianStructure":
        return cls(cs, identity(cs.algebra.dim))

    def evaluate(self, assignment) -> "HermitianStructure":
        g = [[x.evaluate(assignment) if x.free_symbols() else x for x in row] for row in self.g]
        return HermitianStructure(self.cs.evaluate(assignment), g)

    # ---------------------------------------------------------- forms
    @cached_property
    def F(self) -> Form:
        """Fundamental form ``F(X, Y) = g(JX, Y)`` in the real frame."""
        J, g, N = self.cs.J, self.g, self.dim
        t = {}
        for a in range(N):
            for b in range(a + 1, N):
                s = Scalar.const(0)
                for k in range(N):
                    if J[k][a] and g[k][b]:
                        s = s + J[k][a] * g[k][b]
                if s:
                    t[(a, b)] = s
        return Form(N, t)

    @cached_property
    def F_c(self) -> Form:
        return self.cs.to_complex(self.F)

    def F_power(self, k: int, complex_basis: bool = True) -> Form:
        return (self.F_c if complex_basis else self.F).power(k)

    @cached_property
    def dF(self) -> Form:
        return self.cs.algebra.d(self.F)

    def torsion_c(self) -> Form:
        """Bismut torsion 3-form ``c = -J dF``."""
        return -self.cs.J_form(self.dF)

    # ---------------------------------------------------------- conditions
    def ddbar_F_power(self, k: int) -> Form:
        return self.cs.ddbar(self.F_power(k))

    def check_condition(self, kind: str) -> ConditionVerdict:
        n = self.n
        if kind not in CONDITIONS:
            raise ValueError(f"unknown condition {kind!r}; choose from {CONDITIONS}")
        if kind == "kahler":
            w = self.dF
            return ConditionVerdict(kind, not w, w, {"basis": "real"})
        if kind == "balanced":
            w = self.cs.algebra.d(self.F.power(n - 1))
            return ConditionVerdict(kind, not w, w, {"basis": "real"})
        if kind == "lcb":
            w = self.cs.algebra.d(self.lee_form())
            return ConditionVerdict(kind, not w, w, {"basis": "real"})
        self.cs._require_integrable()
        if kind == "skt":
            w = self.ddbar_F_power(1)
            return ConditionVerdict(kind, not w, w)
        if kind == "astheno":
            if n < 3:
                raise ValueError("the astheno-Kahler condition needs complex dimension >= 3")
            w = self.ddbar_F_power(n - 2)
            return ConditionVerdict(kind, not w, w)
        if kind == "standard":
            w = self.ddbar_F_power(n - 1)
            return ConditionVerdict(kind, not w, w)
        # special: ddbar F = 0 and ddbar F^2 = 0
        w1 = self.ddbar_F_power(1)
        w2 = self.ddbar_F_power(2)
        return ConditionVerdict(kind, not w1 and not w2, w1 if w1 else w2, {"failing_power": 1 if w1 else 2 if w2 else None})

    # ---------------------------------------------------------- metric ops
    def _require_constant_metric(self) -> None:
        if not all(x.is_constant() for row in self.g for x in row):
            raise MetricError("this operation needs a parameter-free metric")

    @cached_property
    def g_inv(self) -> list:
        self._require_constant_metric()
        return inverse(self.g)

    @cached_property
    def det_g(self) -> Scalar:
        self._require_constant_metric()
        return det(self.g)

    @cached_property
    def _raise_rows(self) -> list:
        return [Form.one_form(row) for row in self.g_inv]

    def raise_form(self, a: Form) -> Form:
        """Components with all indices raised by ``g^{-1}``."""
        return a.pullback(self._raise_rows)

    def inner(self, a: Form, b: Form) -> Scalar:
        """Pointwise inner product (bilinear, determinant normalization)."""
        rb = self.raise_form(b)
        s = Scalar.const(0)
        for k, c in a.items():
            v = rb.terms.get(k)
            if v:
                s = s + c * v
        return s

    def norm2(self, a: Form) -> Scalar:
        return self.inner(a, a)

    def _star_unscaled(self, a: Form) -> Form:
        """Hodge star without the ``sqrt(det g)`` factor."""
        N = self.dim
        full = tuple(range(N))
        res: dict = {}
        for k, c in self.raise_form(a).items():
            comp = tuple(i for i in full if i not in k)
            _, sgn = canonical(k + comp)
            v = c if sgn > 0 else -c
            old = res.get(comp)
            res[comp] = v if old is None else old + v
        return Form._raw(N, {k: v for k, v in res.items() if v})

    @cached_property
    def volume_scale(self) -> Scalar:
        s = _rational_sqrt(self.det_g)
        if s is None:
            raise MetricError(f"sqrt(det g) = sqrt({self.det_g}) is not rational; Hodge star unavailable")
        return s

    def hodge_star(self, a: Form) -> Form:
        """Hodge star with orientation ``e^1 ^ ... ^ e^N``."""
        return self._star_unscaled(a) * self.volume_scale

    def codifferential(self, a: Form) -> Form:
        """``d* = -*d*`` (even dimension); only ``det g`` enters, never its root."""
        out = Form.zero(self.dim)
        for p in sorted(a.degrees()):
            if p == 0:
                continue
            comp = a.component(p)
            inner = self.cs.algebra.d(self._star_unscaled(comp))
            out = out - self._star_unscaled(inner) * self.det_g
        return out

    def lefschetz_L(self, a: Form) -> Form:
        return self.F.wedge(a)

    def lefschetz_Lstar(self, a: Form) -> Form:
        """Adjoint of ``L`` for the pointwise inner product."""
        out = Form.zero(self.dim)
        for p in sorted(a.degrees()):
            if p < 2:
                continue
            comp = a.component(p)
            v = self._star_unscaled(self.F.wedge(self._star_unscaled(comp))) * self.det_g
            out = out + (v if p % 2 == 0 else -v)
        return out

    def lee_form(self) -> Form:
        """``theta = J d* F``."""
        return self.cs.J_form(self.codifferential(self.F))

    def lee_constant(self) -> Scalar | None:
        """``kappa`` with ``dF^{n-1} = kappa theta ^ F^{n-1}`` (None if undetermined)."""
        n = self.n
        lhs = self.cs.algebra.d(self.F.power(n - 1))
        rhs = self.lee_form().wedge(self.F.power(n - 1))
        if not rhs:
            return Scalar.const(0) if not lhs else None
        k = next(iter(rhs.terms))
        kappa = lhs.terms.get(k, Scalar.const(0)) / rhs.terms[k]
        return kappa if lhs == rhs * kappa else None
