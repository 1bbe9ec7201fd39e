"""Invariant linear connections on a Lie algebra with a Hermitian structure.

A connection is stored by its Christoffel symbols in the frame,
``Gamma[i][k][j] = e^i(nabla_{e_k} e_j)``, so that the connection 1-forms are
``omega^i_j = sum_k Gamma[i][k][j] e^k`` and ``nabla e_j = sum_i omega^i_j e_i``.

Torsion and curvature follow Cartan::

    tau^i   = de^i + omega^i_j ^ e^j
    Omega^i_j = d omega^i_j + omega^i_k ^ omega^k_j

The named connections (Levi-Civita, Bismut, Chern, first canonical) are
obtained by solving the defining linear conditions exactly; the solver reports
the dimension of the solution space so uniqueness is a checked fact.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from functools import cached_property
from typing import Callable, Sequence

from .forms import Form
from .hermitian import HermitianStructure
from .linalg import InconsistentSystem, SparseSystem
from .scalar import I, Q, Scalar, as_scalar


class ConnectionError_(ValueError):
    """No connection, or more than one, satisfies the requested conditions."""


@dataclass
class ConnectionData:
    name: str
    hs: HermitianStructure
    gamma: list  # gamma[i][k][j]

    @property
    def dim(self) -> int:
        return self.hs.dim

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConnectionData):
            return NotImplemented
        return self.gamma == other.gamma

    # ------------------------------------------------------------ combinations
    def combine(self, other: "ConnectionData", a, b, name: str) -> "ConnectionData":
        """``a * self + b * other`` (an affine combination when ``a + b = 1``)."""
        a, b = as_scalar(a), as_scalar(b)
        N = self.dim
        g = [[[self.gamma[i][k][j] * a + other.gamma[i][k][j] * b for j in range(N)] for k in range(N)] for i in range(N)]
        return ConnectionData(name, self.hs, g)

    # ------------------------------------------------------------ forms
    @cached_property
    def omega(self) -> list:
        """``omega[i][j]`` as 1-forms."""
        N = self.dim
        return [[Form.one_form([self.gamma[i][k][j] for k in range(N)]) for j in range(N)] for i in range(N)]

    @cached_property
    def torsion(self) -> list:
        """Torsion 2-forms ``tau^i``."""
        N = self.dim
        alg = self.hs.cs.algebra
        out = []
        for i in range(N):
            t = alg.d_images[i]
            for j in range(N):
                w = self.omega[i][j]
                if w:
                    t = t + w.wedge(Form.e(N, j + 1))
            out.append(t)
        return out

    @cached_property
    def curvature(self) -> list:
        """Curvature 2-forms ``Omega[i][j]``."""
        N = self.dim
        alg = self.hs.cs.algebra
        om = self.omega
        out = []
        for i in range(N):
            row = []
            for j in range(N):
                acc = alg.d(om[i][j])
                for k in range(N):
                    if om[i][k] and om[k][j]:
                        acc = acc + om[i][k].wedge(om[k][j])
                row.append(acc)
            out.append(row)
        return out

    def nabla(self, x: Sequence, y: Sequence) -> list:
        """``nabla_x y`` for constant frame vectors."""
        N = self.dim
        out = []
        for i in range(N):
            s = Scalar.const(0)
            for k in range(N):
                xk = as_scalar(x[k])
                if not xk:
                    continue
                for j in range(N):
                    yj = as_scalar(y[j])
                    if yj and self.gamma[i][k][j]:
                        s = s + self.gamma[i][k][j] * xk * yj
            out.append(s)
        return out

    def torsion_tensor(self, a: int, b: int) -> list:
        """``T(e_a, e_b)`` as a vector (0-based)."""
        return [self.torsion[i].coeff0((a, b)) if a < b else -self.torsion[i].coeff0((b, a)) if a > b else Scalar.const(0) for i in range(self.dim)]

    def curvature_operator(self, x: Sequence, y: Sequence) -> list:
        """Matrix ``M[i][j] = Omega^i_j(x, y)``."""
        return [[w(x, y) if w else Scalar.const(0) for w in row] for row in self.curvature]

    # ------------------------------------------------------------ axioms
    def metric_defect(self) -> list:
        """Nonzero entries of ``(nabla_k g)(e_a, e_b)``."""
        g, N, G = self.hs.g, self.dim, self.gamma
        bad = []
        for k in range(N):
            for a in range(N):
                for b in range(a, N):
                    s = Scalar.const(0)
                    for i in range(N):
                        s = s + G[i][k][a] * g[i][b] + G[i][k][b] * g[a][i]
                    if s:
                        bad.append(((k, a, b), s))
        return bad

    def complex_defect(self) -> list:
        """Nonzero entries of ``(nabla_k J)`` as ``(k, i, a)``."""
        J, N, G = self.hs.cs.J, self.dim, self.gamma
        bad = []
        for k in range(N):
            for i in range(N):
                for a in range(N):
                    s = Scalar.const(0)
                    for m in range(N):
                        s = s + G[i][k][m] * J[m][a] - J[i][m] * G[m][k][a]
                    if s:
                        bad.append(((k, i, a), s))
        return bad

    def is_metric(self) -> bool:
        return not self.metric_defect()

    def preserves_J(self) -> bool:
        return not self.complex_defect()

    def is_torsion_free(self) -> bool:
        return not any(self.torsion)

    def torsion_3form(self) -> Form:
        """``g(T(X, Y), Z)`` as a 3-form; raises if it is not totally skew."""
        N, g = self.dim, self.hs.g
        low = {}
        for a in range(N):
            for b in range(N):
                T = self.torsion_tensor(a, b)
                for c in range(N):
                    low[(a, b, c)] = sum((T[i] * g[i][c] for i in range(N) if T[i]), Scalar.const(0))
        for (a, b, c), v in low.items():
            if v != -low[(a, c, b)]:
                raise ValueError("torsion is not totally skew")
        return Form(N, {(a, b, c): low[(a, b, c)] for a in range(N) for b in range(a + 1, N) for c in range(b + 1, N)})


def _perm_sign(t: tuple) -> int:
    s = 1
    t = list(t)
    for i in range(len(t)):
        for j in range(i + 1, len(t)):
            if t[i] > t[j]:
                s = -s
    return s


# ---------------------------------------------------------------- solver
def _var(N: int, i: int, k: int, j: int) -> int:
    return (i * N + k) * N + j


def _rational(x: Scalar, what: str):
    if not x.is_constant():
        raise ValueError(f"{what} must be parameter-free")
    re, im = x.constant()
    if im != 0:
        raise ValueError(f"{what} must be real")
    return re


def _numeric(hs: HermitianStructure) -> tuple[list, list]:
    g = [[_rational(x, "metric") for x in row] for row in hs.g]
    J = [[_rational(x, "J") for x in row] for row in hs.cs.J]
    return g, J


def _d_coeff(hs: HermitianStructure, i: int, k: int, j: int) -> Scalar:
    """``de^i(e_k, e_j)``."""
    if k == j:
        return Scalar.const(0)
    f = hs.cs.algebra.d_images[i]
    return f.coeff0((k, j)) if k < j else -f.coeff0((j, k))


def _add_metric(sys: SparseSystem, N: int, g: list) -> None:
    for k in range(N):
        for a in range(N):
            for b in range(a, N):
                row: dict = {}
                for i in range(N):
                    for col, v in ((_var(N, i, k, a), g[i][b]), (_var(N, i, k, b), g[a][i])):
                        if v:
                            row[col] = row.get(col, 0) + v
                sys.add(row, 0)


def _add_complex(sys: SparseSystem, N: int, J: list) -> None:
    for k in range(N):
        for i in range(N):
            for a in range(N):
                row: dict = {}
                for m in range(N):
                    if J[m][a]:
                        c = _var(N, i, k, m)
                        row[c] = row.get(c, 0) + J[m][a]
                    if J[i][m]:
                        c = _var(N, m, k, a)
                        row[c] = row.get(c, 0) - J[i][m]
                sys.add(row, 0)


def _torsion_row(hs: HermitianStructure, N: int, i: int, k: int, j: int, coef=1) -> tuple[dict, Scalar]:
    """``coef * T^i_{kj}`` as (linear part, constant part)."""
    row = {}
    if k != j:
        row[_var(N, i, k, j)] = Q(coef)
        row[_var(N, i, j, k)] = -Q(coef)
    return row, _d_coeff(hs, i, k, j).scale(coef)


def _accumulate(dst: dict, src: dict, factor) -> None:
    for c, v in src.items():
        nv = dst.get(c, 0) + v * factor
        if nv == 0:
            dst.pop(c, None)
        else:
            dst[c] = nv


def _solve(hs: HermitianStructure, name: str, builders: Sequence[Callable[[SparseSystem], None]]) -> ConnectionData:
    N = hs.dim
    sys = SparseSystem(N ** 3)
    for b in builders:
        b(sys)
    try:
        x = sys.solve()
    except InconsistentSystem as exc:
        raise ConnectionError_(f"no {name} connection: {exc}") from None
    if sys.nullity:
        raise ConnectionError_(f"{name} connection is not unique (solution space of dimension {sys.nullity})")
    gamma = [[[x[_var(N, i, k, j)] for j in range(N)] for k in range(N)] for i in range(N)]
    return ConnectionData(name, hs, gamma)


def levi_civita(hs: HermitianStructure) -> ConnectionData:
    g, _ = _numeric(hs)
    N = hs.dim

    def torsion_free(sys):
        for i in range(N):
            for k in range(N):
                for j in range(k + 1, N):
                    row, const = _torsion_row(hs, N, i, k, j)
                    sys.add(row, -const)

    return _solve(hs, "levi-civita", [lambda s: _add_metric(s, N, g), torsion_free])


def bismut(hs: HermitianStructure) -> ConnectionData:
    """Hermitian connection with totally skew torsion."""
    g, J = _numeric(hs)
    N = hs.dim

    def skew(sys):
        # g(T(e_k, e_j), e_l) + g(T(e_k, e_l), e_j) = 0
        for k in range(N):
            for j in range(N):
                for l in range(j, N):
                    row: dict = {}
                    const = Scalar.const(0)
                    for i in range(N):
                        if g[i][l]:
                            r, c = _torsion_row(hs, N, i, k, j)
                            _accumulate(row, r, g[i][l])
                            const = const + c.scale(g[i][l])
                        if g[i][j]:
                            r, c = _torsion_row(hs, N, i, k, l)
                            _accumulate(row, r, g[i][j])
                            const = const + c.scale(g[i][j])
                    sys.add(row, -const)

    return _solve(hs, "bismut", [lambda s: _add_metric(s, N, g), lambda s: _add_complex(s, N, J), skew])


def chern(hs: HermitianStructure) -> ConnectionData:
    """Hermitian connection whose torsion satisfies ``T(JX, Y) = J T(X, Y)``."""
    g, J = _numeric(hs)
    N = hs.dim

    def holomorphic_torsion(sys):
        for i in range(N):
            for k in range(N):
                for j in range(N):
                    row: dict = {}
                    const = Scalar.const(0)
                    for m in range(N):
                        if J[m][k]:
                            r, c = _torsion_row(hs, N, i, m, j)
                            _accumulate(row, r, J[m][k])
                            const = const + c.scale(J[m][k])
                        if J[i][m]:
                            r, c = _torsion_row(hs, N, m, k, j)
                            _accumulate(row, r, -J[i][m])
                            const = const - c.scale(J[i][m])
                    sys.add(row, -const)

    return _solve(hs, "chern", [lambda s: _add_metric(s, N, g), lambda s: _add_complex(s, N, J), holomorphic_torsion])


def first_canonical(hs: HermitianStructure) -> ConnectionData:
    """Hermitian connection ``nabla^LC + A`` with every ``A_X`` anticommuting with ``J``."""
    g, J = _numeric(hs)
    N = hs.dim
    lc = levi_civita(hs).gamma

    def anticommute(sys):
        # sum_m A[i][k][m] J[m][a] + J[i][m] A[m][k][a] = 0 with A = Gamma - Gamma^LC
        for k in range(N):
            for i in range(N):
                for a in range(N):
                    row: dict = {}
                    const = Scalar.const(0)
                    for m in range(N):
                        if J[m][a]:
                            c = _var(N, i, k, m)
                            row[c] = row.get(c, 0) + J[m][a]
                            const = const + lc[i][k][m].scale(J[m][a])
                        if J[i][m]:
                            c = _var(N, m, k, a)
                            row[c] = row.get(c, 0) + J[i][m]
                            const = const + lc[m][k][a].scale(J[i][m])
                    sys.add({c: v for c, v in row.items() if v}, const)

    return _solve(hs, "first-canonical", [lambda s: _add_metric(s, N, g), lambda s: _add_complex(s, N, J), anticommute])


def canonical_family(hs: HermitianStructure, t) -> ConnectionData:
    """``t nabla^C + (1 - t) nabla^0``: Chern at 1, first canonical at 0, Bismut at -1."""
    t = as_scalar(t)
    return chern(hs).combine(first_canonical(hs), t, Scalar.const(1) - t, name=f"canonical(t={t})")


# ---------------------------------------------------------------- oracles
def koszul(hs: HermitianStructure) -> ConnectionData:
    """Levi-Civita connection from the Koszul formula (independent of the solver).

    For invariant fields: ``2 g(nabla_X Y, Z) = g([X,Y],Z) - g([Y,Z],X) + g([Z,X],Y)``.
    """
    N = hs.dim
    c = hs.cs.algebra.structure_constants()  # c[m][a][b] = e^m([e_a, e_b])
    g, ginv = hs.g, hs.g_inv

    def gb(a, b, z):  # g([e_a, e_b], e_z)
        return sum((c[m][a][b] * g[m][z] for m in range(N) if c[m][a][b]), Scalar.const(0))

    half = Scalar.const(Q(1, 2))
    low = [[[(gb(k, j, z) - gb(j, z, k) + gb(z, k, j)) * half for z in range(N)] for j in range(N)] for k in range(N)]
    gamma = [[[sum((ginv[i][z] * low[k][j][z] for z in range(N) if ginv[i][z]), Scalar.const(0)) for j in range(N)] for k in range(N)] for i in range(N)]
    return ConnectionData("koszul", hs, gamma)


def bismut_from_torsion(hs: HermitianStructure) -> ConnectionData:
    """``g(nabla^B_X Y, Z) = g(nabla^LC_X Y, Z) + 1/2 c(X, Y, Z)``."""
    N = hs.dim
    lc = koszul(hs).gamma
    c = hs.torsion_c()
    ginv = hs.g_inv
    half = Scalar.const(Q(1, 2))
    gamma = [[[Scalar.const(0)] * N for _ in range(N)] for _ in range(N)]
    for i in range(N):
        for k in range(N):
            for j in range(N):
                s = lc[i][k][j]
                for z in range(N):
                    if ginv[i][z]:
                        v = _form3(c, k, j, z)
                        if v:
                            s = s + ginv[i][z] * v * half
                gamma[i][k][j] = s
    return ConnectionData("bismut-oracle", hs, gamma)


def _form3(c: Form, a: int, b: int, z: int) -> Scalar:
    if len({a, b, z}) < 3:
        return Scalar.const(0)
    key = tuple(sorted((a, b, z)))
    v = c.coeff0(key)
    return v if _perm_sign((a, b, z)) > 0 else -v


def hermitian_projection(conn: ConnectionData) -> ConnectionData:
    """``1/2 (nabla_X Y - J nabla_X (J Y))``."""
    hs = conn.hs
    N, J = hs.dim, hs.cs.J
    G = conn.gamma
    half = Scalar.const(Q(1, 2))
    out = [[[Scalar.const(0)] * N for _ in range(N)] for _ in range(N)]
    for i in range(N):
        for k in range(N):
            for a in range(N):
                s = G[i][k][a]
                for m in range(N):
                    for p in range(N):
                        if J[i][m] and J[p][a] and G[m][k][p]:
                            s = s - J[i][m] * G[m][k][p] * J[p][a]
                out[i][k][a] = s * half
    return ConnectionData("projection", hs, out)


# ---------------------------------------------------------------- traces
def trace_R_wedge_R(conn: ConnectionData) -> Form:
    """``sum_{i,j} Omega^i_j ^ Omega^i_j``."""
    N = conn.dim
    acc = Form.zero(N)
    for row in conn.curvature:
        for w in row:
            if w:
                acc = acc + w.wedge(w)
    return acc


def trace_R(conn: ConnectionData, x: Sequence, y: Sequence) -> Scalar:
    M = conn.curvature_operator(x, y)
    return sum((M[i][i] for i in range(conn.dim)), Scalar.const(0))


def trace_J_R(conn: ConnectionData, x: Sequence, y: Sequence) -> Scalar:
    """``trace(J o R(x, y))``."""
    N = conn.dim
    J = conn.hs.cs.J
    M = conn.curvature_operator(x, y)
    s = Scalar.const(0)
    for i in range(N):
        for m in range(N):
            if J[i][m] and M[m][i]:
                s = s + J[i][m] * M[m][i]
    return s


def ricci_form(conn: ConnectionData) -> Form:
    """``rho(X, Y) = -1/2 trace(J o R(X, Y))``."""
    N = conn.dim
    J = conn.hs.cs.J
    acc = Form.zero(N)
    for i in range(N):
        for m in range(N):
            if J[i][m]:
                w = conn.curvature[m][i]
                if w:
                    acc = acc + w * J[i][m]
    return acc * Scalar.const(Q(-1, 2))


def ricci_form_metric(conn: ConnectionData) -> Form:
    """``rho(X, Y) = 1/2 sum_{a,b} g^{ab} g(R(X, Y) e_a, J e_b)`` (frame independent)."""
    hs = conn.hs
    N, g, J, ginv = hs.dim, hs.g, hs.cs.J, hs.g_inv
    Om = conn.curvature
    acc = Form.zero(N)
    for a in range(N):
        for b in range(N):
            if not ginv[a][b]:
                continue
            # g(R e_a, J e_b) = sum_{i,m} Omega^i_a g_{im} J^m_b
            for i in range(N):
                if not Om[i][a]:
                    continue
                coef = sum((g[i][m] * J[m][b] for m in range(N) if g[i][m] and J[m][b]), Scalar.const(0))
                if coef:
                    acc = acc + Om[i][a] * (coef * ginv[a][b])
    return acc * Scalar.const(Q(1, 2))


def ricci_traces(hs: HermitianStructure) -> dict:
    """Traces ``<rho, F>`` of the Bismut and Chern Ricci forms, two ways each."""
    out = {}
    for label, conn in (("bismut", bismut(hs)), ("chern", chern(hs))):
        r1 = ricci_form(conn)
        r2 = ricci_form_metric(conn)
        if r1 != r2:
            raise AssertionError(f"{label} Ricci form disagrees between frame and metric traces")
        out[label] = hs.inner(r1, hs.F)
        out[label + "_lstar"] = hs.lefschetz_Lstar(r1).scalar_part()
    return out


def chern_from_dbar(hs: HermitianStructure) -> ConnectionData:
    """Chern connection built in the complex frame (independent of the solver).

    On invariant (1,0)-fields ``nabla_{conj W} Z = [conj W, Z]^{1,0}``; the
    (1,0)-directions follow from metric compatibility, and the rest by
    conjugation.
    """
    from .linalg import inverse

    cs = hs.cs
    n, N = cs.n, hs.dim
    P, Pinv, swap = cs.P, cs.Pinv, cs.swap
    zero = Scalar.const(0)
    # cbr[m][a][b] = theta^m([theta_a, theta_b])
    cbr = [[[zero] * N for _ in range(N)] for _ in range(N)]
    for m, f in enumerate(cs.calg.d_images):
        for (a, b), v in f.items():
            cbr[m][a][b] = -v
            cbr[m][b][a] = v
    G = [[sum((Pinv[r][a] * Pinv[s][b] * hs.g[r][s] for r in range(N) for s in range(N) if Pinv[r][a] and Pinv[s][b] and hs.g[r][s]), zero) for b in range(N)] for a in range(N)]
    H = [[G[b][n + l] for l in range(n)] for b in range(n)]  # H[b][l] = G(theta_b, conj theta_l)
    Hinv = inverse(H)
    gc = [[[zero] * N for _ in range(N)] for _ in range(N)]
    for b in range(n):
        for a in range(n, N):
            for m in range(n):
                gc[m][a][b] = cbr[m][a][b]
        for a in range(n):
            # G(nabla_a theta_b, conj theta_l) = -G(theta_b, [theta_a, conj theta_l]^{0,1})
            rhs = [-sum((cbr[n + q][a][n + l] * G[b][n + q] for q in range(n) if cbr[n + q][a][n + l]), zero) for l in range(n)]
            # nabla_a theta_b = sum_m x_m theta_m with sum_m x_m H[m][l] = rhs[l]
            for m in range(n):
                gc[m][a][b] = sum((rhs[l] * Hinv[l][m] for l in range(n) if rhs[l]), zero)
    for m in range(N):
        for a in range(N):
            for b in range(n, N):
                gc[m][a][b] = gc[swap[m]][swap[a]][swap[b]].conj()
    gamma = [[[zero] * N for _ in range(N)] for _ in range(N)]
    for i in range(N):
        for k in range(N):
            for j in range(N):
                s = zero
                for m in range(N):
                    if not Pinv[i][m]:
                        continue
                    for a in range(N):
                        if not P[a][k]:
                            continue
                        for b in range(N):
                            if P[b][j] and gc[m][a][b]:
                                s = s + Pinv[i][m] * P[a][k] * P[b][j] * gc[m][a][b]
                gamma[i][k][j] = s
    return ConnectionData("chern-dbar", hs, gamma)


# ------------------------------------------------------------------ Lee form identity
def torsion_norm2(conn: ConnectionData) -> Scalar:
    """``sum_{i<j,k} g(T(e_i, e_j), e_k)^2`` in an orthonormal frame, via ``g^{-1}``."""
    hs = conn.hs
    N, g, gi = hs.dim, hs.g, hs.g_inv
    zero = Scalar.const(0)
    T = [[conn.torsion_tensor(a, b) for b in range(N)] for a in range(N)]
    s = zero
    for a in range(N):
        for c in range(N):
            if not gi[a][c]:
                continue
            for b in range(N):
                for d in range(N):
                    if not gi[b][d]:
                        continue
                    gT = [sum((g[k][l] * T[a][b][k] for k in range(N) if T[a][b][k] and g[k][l]), zero) for l in range(N)]
                    v = sum((gT[l] * T[c][d][l] for l in range(N) if gT[l] and T[c][d][l]), zero)
                    if v:
                        s = s + gi[a][c] * gi[b][d] * v
    return s * Scalar.const(Q(1, 2))


@dataclass(frozen=True)
class LeeIdentity:
    """Terms of ``L*^{n-1}(2i ddbar F^{n-2}) = 4^{n-1}(n-1)!(n-2) [2(n-2) d*theta + 2|theta|^2 - |T|^2]``."""

    n: int
    lhs: Scalar
    codiff_theta: Scalar
    theta_norm2: Scalar
    torsion_norm2: Scalar

    @property
    def bracket(self) -> Scalar:
        n = self.n
        return self.codiff_theta * (2 * (n - 2)) + self.theta_norm2 * 2 - self.torsion_norm2

    @property
    def rhs(self) -> Scalar:
        n = self.n
        return self.bracket * (4 ** (n - 1) * factorial(n - 1) * (n - 2))

    @property
    def ratio(self) -> Scalar | None:
        return self.lhs / self.rhs if self.rhs else None


def lee_identity(hs: HermitianStructure) -> LeeIdentity:
    n = hs.n
    if n < 3:
        raise ValueError("needs complex dimension >= 3")
    w = hs.cs.to_real(hs.ddbar_F_power(n - 2)) * (2 * I)
    for _ in range(n - 1):
        w = hs.lefschetz_Lstar(w)
    theta = hs.lee_form()
    return LeeIdentity(
        n,
        w.scalar_part(),
        hs.codifferential(theta).scalar_part(),
        hs.norm2(theta),
        torsion_norm2(chern(hs)),
    )
