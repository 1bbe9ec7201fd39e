"""Small exact linear algebra over :class:`Scalar` entries."""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

from .scalar import Q, Scalar, as_scalar

Matrix = list  # list of rows of Scalars


class SingularMatrix(ValueError):
    pass


class InconsistentSystem(ValueError):
    pass


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[as_scalar(x) for x in row] for row in rows]


def identity(n: int) -> Matrix:
    return [[Scalar.const(1 if i == j else 0) for j in range(n)] for i in range(n)]


def zeros(n: int, m: int | None = None) -> Matrix:
    m = n if m is None else m
    return [[Scalar.const(0) for _ in range(m)] for _ in range(n)]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    out = []
    for row in a:
        out_row = []
        for col in bt:
            s = Scalar.const(0)
            for x, y in zip(row, col):
                if x and y:
                    s = s + x * y
            out_row.append(s)
        out.append(out_row)
    return out


def matvec(a: Matrix, v: Sequence) -> list:
    return [sum((x * as_scalar(y) for x, y in zip(row, v) if x), Scalar.const(0)) for row in a]


def mat_conj(a: Matrix) -> Matrix:
    return [[x.conj() for x in row] for row in a]


def mat_eq(a: Matrix, b: Matrix) -> bool:
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def is_constant(a: Matrix) -> bool:
    return all(x.is_constant() for row in a for x in row)


def det(a: Matrix) -> Scalar:
    """Determinant by cofactor expansion over column subsets (fine up to n ~ 10)."""
    n = len(a)
    if n == 0:
        return Scalar.const(1)
    # minors[cols] = det of rows [0, len(cols)) restricted to cols
    minors: dict = {(): Scalar.const(1)}
    for r in range(n):
        new: dict = {}
        for cols in combinations(range(n), r + 1):
            s = Scalar.const(0)
            for pos, c in enumerate(cols):
                x = a[r][c]
                if not x:
                    continue
                sub = minors[cols[:pos] + cols[pos + 1:]]
                if not sub:
                    continue
                term = x * sub
                s = s + (term if (r + pos) % 2 == 0 else -term)
            new[cols] = s
        minors = new
    return minors[tuple(range(n))]


def inverse(a: Matrix) -> Matrix:
    """Gauss-Jordan inverse; every pivot must be a nonzero constant."""
    n = len(a)
    m = [list(row) + [Scalar.const(1 if i == j else 0) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            x = m[r][col]
            if x and x.is_constant():
                piv = r
                break
        if piv is None:
            if any(m[r][col] for r in range(col, n)):
                raise SingularMatrix("inverse needs a parameter-free pivot")
            raise SingularMatrix("matrix is singular")
        m[col], m[piv] = m[piv], m[col]
        inv = m[col][col].inverse()
        re, im = inv.constant()
        m[col] = [x.scale(re, im) for x in m[col]]
        for r in range(n):
            if r == col:
                continue
            f = m[r][col]
            if not f:
                continue
            m[r] = [x - f * y if y else x for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def nullspace_left(a: Matrix) -> list[list[Scalar]]:
    """Basis of row vectors r with r a = 0, in reduced echelon form (constant entries)."""
    at = transpose(a)
    return nullspace(at)


def nullspace(a: Matrix) -> list[list[Scalar]]:
    """Basis of column vectors x with a x = 0 (parameter-free matrices only)."""
    rows = [list(r) for r in a]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if rows[i][c]:
                if not rows[i][c].is_constant():
                    raise ValueError("nullspace needs a parameter-free matrix")
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Scalar.const(0)] * ncols
        v[fc] = Scalar.const(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][fc]
        basis.append(v)
    return basis


class SparseSystem:
    """Incremental exact elimination for ``A x = b``.

    ``A`` has rational (gmpy2/Fraction) entries, ``b`` has :class:`Scalar`
    entries, so symbolic constants such as ``pi`` can ride along on the
    right-hand side.
    """

    def __init__(self, nvars: int):
        self.nvars = nvars
        self._order: list[int] = []
        self._rows: dict[int, tuple[dict, Scalar]] = {}
        self.inconsistent: list[Scalar] = []

    def add(self, row: dict, rhs=0) -> None:
        row = {c: Q(v) for c, v in row.items() if v != 0}
        rhs = as_scalar(rhs)
        for p in self._order:
            f = row.get(p)
            if f is None:
                continue
            prow, prhs = self._rows[p]
            for c, v in prow.items():
                nv = row.get(c, 0) - f * v
                if nv == 0:
                    row.pop(c, None)
                else:
                    row[c] = nv
            if prhs:
                rhs = rhs - prhs.scale(f)
        if not row:
            if rhs:
                self.inconsistent.append(rhs)
            return
        p = min(row)
        f = row[p]
        if f != 1:
            inv = 1 / f
            row = {c: v * inv for c, v in row.items()}
            rhs = rhs.scale(inv)
        self._order.append(p)
        self._rows[p] = (row, rhs)

    @property
    def rank(self) -> int:
        return len(self._order)

    @property
    def nullity(self) -> int:
        return self.nvars - self.rank

    def solve(self) -> list[Scalar]:
        if self.inconsistent:
            raise InconsistentSystem(f"system is inconsistent (residual {self.inconsistent[0]})")
        x = [Scalar.const(0)] * self.nvars
        for p in reversed(self._order):
            row, rhs = self._rows[p]
            val = rhs
            for c, v in row.items():
                if c != p and x[c]:
                    val = val - x[c].scale(v)
            x[p] = val
        return x
