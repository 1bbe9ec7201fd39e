"""Alternating forms on a finite-dimensional space with exact coefficients.

A form is stored as a map from strictly increasing index tuples (0-based) to
:class:`~asthenolab.scalar.Scalar`.  Printing uses 1-based indices so that
``e12`` means ``e^1 ^ e^2``.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

from .scalar import ONE, Scalar, as_scalar, conjugate_closure

__all__ = ["Form", "canonical", "wedge", "wedge_all", "DimensionMismatch"]


class DimensionMismatch(ValueError):
    pass


@lru_cache(maxsize=None)
def canonical(idx: tuple) -> tuple:
    """Sort ``idx`` returning ``(sorted_tuple, sign)``; sign 0 on a repeat."""
    n = len(idx)
    if n < 2:
        return idx, 1
    if len(set(idx)) != n:
        return (), 0
    inv = 0
    for a in range(n):
        ia = idx[a]
        for b in range(a + 1, n):
            if ia > idx[b]:
                inv += 1
    return tuple(sorted(idx)), (-1 if inv & 1 else 1)


class Form:
    """Immutable (possibly inhomogeneous) exterior form of ambient dimension ``dim``."""

    __slots__ = ("dim", "_t")

    def __init__(self, dim: int, terms: Mapping[tuple, object] | None = None):
        self.dim = dim
        t: dict = {}
        if terms:
            for idx, c in terms.items():
                idx = tuple(idx)
                if any(i < 0 or i >= dim for i in idx):
                    raise IndexError(f"index out of range in {idx} for dimension {dim}")
                key, sgn = canonical(idx)
                if sgn == 0:
                    continue
                c = as_scalar(c)
                if sgn < 0:
                    c = -c
                old = t.get(key)
                c = c if old is None else old + c
                if c.is_zero():
                    t.pop(key, None)
                else:
                    t[key] = c
        self._t = t

    @classmethod
    def _raw(cls, dim: int, t: dict) -> "Form":
        f = cls.__new__(cls)
        f.dim = dim
        f._t = t
        return f

    # ------------------------------------------------------------ builders
    @classmethod
    def zero(cls, dim: int) -> "Form":
        return cls._raw(dim, {})

    @classmethod
    def scalar(cls, dim: int, c) -> "Form":
        c = as_scalar(c)
        return cls._raw(dim, {(): c} if c else {})

    @classmethod
    def e(cls, dim: int, *indices: int, coeff=ONE) -> "Form":
        """Basis monomial from 1-based indices, e.g. ``Form.e(6, 1, 2)``."""
        return cls(dim, {tuple(i - 1 for i in indices): coeff})

    @classmethod
    def one_form(cls, coeffs: Sequence) -> "Form":
        return cls(len(coeffs), {(k,): c for k, c in enumerate(coeffs) if as_scalar(c)})

    # ---------------------------------------------------------- inspection
    @property
    def terms(self) -> dict:
        return dict(self._t)

    def items(self):
        return self._t.items()

    def coeff(self, *indices: int) -> Scalar:
        """Coefficient of the 1-based monomial (sign-corrected)."""
        key, sgn = canonical(tuple(i - 1 for i in indices))
        if sgn == 0:
            return Scalar.const(0)
        c = self._t.get(key, Scalar.const(0))
        return c if sgn > 0 else -c

    def coeff0(self, idx: tuple) -> Scalar:
        key, sgn = canonical(tuple(idx))
        if sgn == 0:
            return Scalar.const(0)
        c = self._t.get(key, Scalar.const(0))
        return c if sgn > 0 else -c

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self) -> bool:
        return bool(self._t)

    def degrees(self) -> set[int]:
        return {len(k) for k in self._t}

    def degree(self) -> int:
        """Degree of a homogeneous form (0 for the zero form)."""
        ds = self.degrees()
        if len(ds) > 1:
            raise ValueError(f"form is not homogeneous (degrees {sorted(ds)})")
        return ds.pop() if ds else 0

    def component(self, p: int) -> "Form":
        return Form._raw(self.dim, {k: c for k, c in self._t.items() if len(k) == p})

    def free_symbols(self) -> set[str]:
        out: set[str] = set()
        for c in self._t.values():
            out |= c.free_symbols()
        return out

    def scalar_part(self) -> Scalar:
        return self._t.get((), Scalar.const(0))

    # ----------------------------------------------------------- algebra
    def _check(self, other: "Form") -> None:
        if self.dim != other.dim:
            raise DimensionMismatch(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "Form") -> "Form":
        if not isinstance(other, Form):
            return NotImplemented
        self._check(other)
        t = dict(self._t)
        for k, c in other._t.items():
            old = t.get(k)
            if old is None:
                t[k] = c
            else:
                s = old + c
                if s.is_zero():
                    del t[k]
                else:
                    t[k] = s
        return Form._raw(self.dim, t)

    def __neg__(self) -> "Form":
        return Form._raw(self.dim, {k: -c for k, c in self._t.items()})

    def __sub__(self, other: "Form") -> "Form":
        if not isinstance(other, Form):
            return NotImplemented
        return self + (-other)

    def __mul__(self, c) -> "Form":
        if isinstance(c, Form):
            return NotImplemented
        c = as_scalar(c)
        if c.is_zero():
            return Form.zero(self.dim)
        if c.is_constant():
            re, im = c.constant()
            return Form._raw(self.dim, {k: v.scale(re, im) for k, v in self._t.items()})
        t = {}
        for k, v in self._t.items():
            p = v * c
            if p:
                t[k] = p
        return Form._raw(self.dim, t)

    __rmul__ = __mul__

    def __truediv__(self, c) -> "Form":
        return self * (Scalar.const(1) / as_scalar(c))

    def wedge(self, other: "Form") -> "Form":
        self._check(other)
        if not self._t or not other._t:
            return Form.zero(self.dim)
        t: dict = {}
        for k1, c1 in self._t.items():
            for k2, c2 in other._t.items():
                key, sgn = canonical(k1 + k2)
                if sgn == 0:
                    continue
                p = c1 * c2
                if sgn < 0:
                    p = -p
                old = t.get(key)
                t[key] = p if old is None else old + p
        return Form._raw(self.dim, {k: v for k, v in t.items() if v})

    def power(self, k: int) -> "Form":
        out = Form.scalar(self.dim, 1)
        for _ in range(k):
            out = out.wedge(self)
        return out

    def map_coeffs(self, fn: Callable[[Scalar], Scalar]) -> "Form":
        t = {}
        for k, c in self._t.items():
            v = fn(c)
            if v:
                t[k] = v
        return Form._raw(self.dim, t)

    def conjugate(self, swap: Sequence[int] | None = None) -> "Form":
        """Coefficient-wise conjugation, optionally relabelling indices by ``swap``."""
        if swap is None:
            return self.map_coeffs(lambda c: c.conj())
        return Form(self.dim, {tuple(swap[i] for i in k): c.conj() for k, c in self._t.items()})

    def interior(self, v: Sequence) -> "Form":
        """Contraction ``i_v`` with the vector whose frame components are ``v``."""
        if len(v) != self.dim:
            raise DimensionMismatch("vector length does not match form dimension")
        vs = [as_scalar(x) for x in v]
        t: dict = {}
        for k, c in self._t.items():
            for pos, idx in enumerate(k):
                vi = vs[idx]
                if not vi:
                    continue
                key = k[:pos] + k[pos + 1:]
                p = c * vi
                if pos & 1:
                    p = -p
                old = t.get(key)
                t[key] = p if old is None else old + p
        return Form._raw(self.dim, {k: c for k, c in t.items() if c})

    def interior_basis(self, j: int) -> "Form":
        """Contraction with the 0-based frame vector ``e_j``."""
        t: dict = {}
        for k, c in self._t.items():
            if j in k:
                pos = k.index(j)
                key = k[:pos] + k[pos + 1:]
                t[key] = -c if pos & 1 else c
        return Form._raw(self.dim, t)

    def __call__(self, *vectors: Sequence) -> Scalar:
        """Evaluate a homogeneous p-form on p frame vectors (determinant convention)."""
        f = self
        for v in vectors:  # alpha(v1, ..., vp) = i_vp ... i_v1 alpha
            f = f.interior(v)
        return f.scalar_part()

    def evaluate(self, assignment: Mapping) -> "Form":
        full = conjugate_closure(assignment)
        missing = self.free_symbols() - set(full)
        if missing:
            raise KeyError(f"missing values for parameters: {sorted(missing)}")
        return self.map_coeffs(lambda c: c.subs(full))

    def subs(self, assignment: Mapping) -> "Form":
        return self.map_coeffs(lambda c: c.subs(assignment))

    def pullback(self, images: Sequence["Form"]) -> "Form":
        """Substitute basis 1-form ``k`` by the 1-form ``images[k]``.

        The result lives in the ambient space of the images.
        """
        if len(images) != self.dim:
            raise DimensionMismatch("need one image per basis 1-form")
        new_dim = images[0].dim if images else self.dim
        rows = [{kk[0]: c for kk, c in im._t.items()} for im in images]
        t: dict = {}
        for k, c in self._t.items():
            partial = {(): c}
            for idx in k:
                nxt: dict = {}
                for key, val in partial.items():
                    for j, a in rows[idx].items():
                        if j in key:
                            continue
                        nk, sgn = canonical(key + (j,))
                        p = val * a
                        if sgn < 0:
                            p = -p
                        old = nxt.get(nk)
                        nxt[nk] = p if old is None else old + p
                partial = {kk: vv for kk, vv in nxt.items() if vv}
            for key, val in partial.items():
                old = t.get(key)
                t[key] = val if old is None else old + val
        return Form._raw(new_dim, {k: v for k, v in t.items() if v})

    def embed(self, new_dim: int, offset: int = 0) -> "Form":
        """View this form inside a bigger space, shifting indices by ``offset``."""
        if new_dim < self.dim + offset:
            raise DimensionMismatch("target dimension too small")
        return Form._raw(new_dim, {tuple(i + offset for i in k): c for k, c in self._t.items()})

    def restrict(self, new_dim: int) -> "Form":
        """Drop every term that involves an index >= ``new_dim``."""
        return Form._raw(new_dim, {k: c for k, c in self._t.items() if all(i < new_dim for i in k)})

    # ---------------------------------------------------------- comparison
    def __eq__(self, other) -> bool:
        if isinstance(other, (int,)) and other == 0:
            return self.is_zero()
        if not isinstance(other, Form):
            return NotImplemented
        return self.dim == other.dim and self._t == other._t

    def __hash__(self) -> int:
        return hash((self.dim, frozenset(self._t.items())))

    # ------------------------------------------------------------ printing
    def to_str(self, letter: str = "e") -> str:
        if not self._t:
            return "0"
        parts = []
        for k in sorted(self._t, key=lambda k: (len(k), k)):
            c = self._t[k]
            mono = _mono_str(k, letter)
            cs = str(c)
            if _is_sum(cs):
                cs = f"({cs})"
            if not k:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"{cs}*{mono}")
        s = parts[0]
        for p in parts[1:]:
            s += " - " + p[1:] if p.startswith("-") else " + " + p
        return s

    def __str__(self) -> str:
        return self.to_str()

    def __repr__(self) -> str:
        return f"Form({self.dim}, {self.to_str()!r})"


def _is_sum(cs: str) -> bool:
    """True if ``cs`` has a top-level ``+`` or ``-`` after its first character."""
    depth = 0
    for pos, ch in enumerate(cs):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and pos > 0:
            return True
    return False


def _mono_str(k: tuple, letter: str) -> str:
    if all(i < 9 for i in k):
        return letter + "".join(str(i + 1) for i in k)
    return "^".join(f"{letter}{i + 1}" for i in k)


def wedge(*forms: Form) -> Form:
    return wedge_all(forms)


def wedge_all(forms: Iterable[Form]) -> Form:
    forms = list(forms)
    if not forms:
        raise ValueError("wedge of nothing")
    out = forms[0]
    for f in forms[1:]:
        out = out.wedge(f)
    return out
