"""Independent reference implementations used by the tests."""

from itertools import permutations

import sympy as sp

from asthenolab.scalar import Scalar, is_real_symbol

_REAL_PARTS: dict[str, tuple] = {}


def _parts(name: str):
    if name not in _REAL_PARTS:
        _REAL_PARTS[name] = sp.symbols(f"{name}_re {name}_im", real=True)
    return _REAL_PARTS[name]


def to_sympy(s: Scalar):
    """Expand a Scalar over real and imaginary parts of its parameters."""
    expr = sp.Integer(0)
    for mono, (re, im) in s.terms.items():
        t = sp.Rational(int(re.numerator), int(re.denominator)) + sp.I * sp.Rational(int(im.numerator), int(im.denominator))
        for name, e in mono:
            if name == "pi":
                t *= sp.pi**e
                continue
            if is_real_symbol(name):
                t *= sp.Symbol(name, real=True) ** e
                continue
            x, y = _parts(name.rstrip("~"))
            t *= (x - sp.I * y if name.endswith("~") else x + sp.I * y) ** e
        expr += t
    return sp.expand(expr)


def perm_sign(p) -> int:
    sign = 1
    p = list(p)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


def dense_wedge(a: dict, b: dict, dim: int) -> dict:
    """Wedge product via the antisymmetrization sum, no canonical sorting shortcut."""
    out: dict = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            idx = ka + kb
            if len(set(idx)) < len(idx):
                continue
            key = tuple(sorted(idx))
            order = [key.index(i) for i in idx]
            out[key] = out.get(key, 0) + perm_sign(order) * ca * cb
    return {k: v for k, v in out.items() if v != 0}


def evaluate_dense(form_terms: dict, vectors: list) -> object:
    """``alpha(v_1, ..., v_p)`` by the full permutation sum."""
    total = 0
    p = len(vectors)
    for key, c in form_terms.items():
        for perm in permutations(range(p)):
            prod = c * perm_sign(perm)
            for slot, k in zip(perm, key):
                prod = prod * vectors[slot][k]
            total = total + prod
    return total


def ce_differential_value(alg, form, idx: tuple):
    """``(d alpha)(e_{i0}, ..., e_{ip})`` from the Chevalley-Eilenberg formula.

    Uses only the bracket table: ``d alpha(X_0..X_p) = sum_{i<j} (-1)^{i+j}
    alpha([X_i, X_j], X_0, ..^i..^j.., X_p)``.
    """
    N = alg.dim
    c = alg.structure_constants()
    basis = [[1 if k == i else 0 for k in range(N)] for i in idx]
    terms = dict(form.items())
    total = 0
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            br = [c[k][idx[i]][idx[j]] for k in range(N)]
            rest = [v for m, v in enumerate(basis) if m not in (i, j)]
            val = evaluate_dense(terms, [br] + rest)
            total = total + (val if (i + j) % 2 == 0 else -val)
    return total
