"""Exact scalars: polynomials with Gaussian-rational coefficients.

Every parameter ``p`` has a formal conjugate ``p~``; both are independent
indeterminates tied together only by :meth:`Scalar.conj` and by the
consistency check in :meth:`Scalar.evaluate`.  Symbols registered as real
(``pi`` always is) are their own conjugate.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Mapping, Union

try:  # gmpy2 is several times faster than Fraction for this workload
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    Q = Fraction

__all__ = ["Scalar", "Q", "as_scalar", "register_real", "is_real_symbol", "conj_name"]

_ZERO = Q(0)
_ONE = Q(1)

_REAL_SYMBOLS: set[str] = {"pi"}


def register_real(name: str) -> None:
    """Declare ``name`` as a self-conjugate symbol."""
    if name.endswith("~"):
        raise ValueError(f"real symbol name cannot end with '~': {name!r}")
    _REAL_SYMBOLS.add(name)


def is_real_symbol(name: str) -> bool:
    return name in _REAL_SYMBOLS


def conj_name(name: str) -> str:
    if name.endswith("~"):
        return name[:-1]
    if name in _REAL_SYMBOLS:
        return name
    return name + "~"


def _sort_key(name: str):
    # a3 and a3~ sit next to each other; a10 after a9
    base = name.rstrip("~")
    head = base.rstrip("0123456789")
    digits = base[len(head):]
    return (head, int(digits) if digits else -1, base, name.endswith("~"))


@lru_cache(maxsize=None)
def _mono_mul(m1: tuple, m2: tuple) -> tuple:
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for v, e in m2:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items(), key=lambda kv: _sort_key(kv[0])))


@lru_cache(maxsize=None)
def _mono_conj(m: tuple) -> tuple:
    return tuple(sorted(((conj_name(v), e) for v, e in m), key=lambda kv: _sort_key(kv[0])))


def _mono_key(m: tuple):
    return (sum(e for _, e in m), [(_sort_key(v), e) for v, e in m])


Number = Union[int, Fraction, "Scalar", complex]


class Scalar:
    """Immutable exact polynomial over Q[i]."""

    __slots__ = ("_t", "_hash")

    def __init__(self, terms: Mapping[tuple, tuple] | None = None):
        # terms: monomial -> (re, im); zero coefficients must already be pruned
        self._t = dict(terms) if terms else {}
        self._hash = None

    # ----------------------------------------------------------------- build
    @classmethod
    def _raw(cls, t: dict) -> "Scalar":
        s = cls.__new__(cls)
        s._t = t
        s._hash = None
        return s

    @classmethod
    def const(cls, re=0, im=0) -> "Scalar":
        re, im = Q(re), Q(im)
        if re == 0 and im == 0:
            return cls._raw({})
        return cls._raw({(): (re, im)})

    @classmethod
    def symbol(cls, name: str, real: bool = False) -> "Scalar":
        if real:
            register_real(name)
        return cls._raw({((name, 1),): (_ONE, _ZERO)})

    @classmethod
    def from_number(cls, x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, complex):
            return cls.const(Fraction(x.real), Fraction(x.imag))
        if isinstance(x, float):
            raise TypeError("floating point values are not allowed in exact scalars")
        return cls.const(x, 0)

    # ----------------------------------------------------------- inspection
    @property
    def terms(self) -> dict:
        return dict(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self) -> bool:
        return bool(self._t)

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and () in self._t)

    def constant(self) -> tuple:
        """Return ``(re, im)`` of a parameter-free scalar."""
        if not self.is_constant():
            raise ValueError(f"scalar {self} is not parameter-free")
        return self._t.get((), (_ZERO, _ZERO))

    def constant_term(self) -> "Scalar":
        c = self._t.get(())
        return Scalar._raw({(): c}) if c else Scalar._raw({})

    def free_symbols(self) -> set[str]:
        return {v for m in self._t for v, _ in m}

    def degree(self) -> int:
        return max((sum(e for _, e in m) for m in self._t), default=0)

    def is_real(self) -> bool:
        return self == self.conj()

    def to_complex(self) -> complex:
        re, im = self.constant()
        return complex(float(re), float(im))

    def to_fraction(self) -> Fraction:
        re, im = self.constant()
        if im != 0:
            raise ValueError(f"{self} is not real")
        return Fraction(int(re.numerator), int(re.denominator))

    # ------------------------------------------------------------ arithmetic
    def __add__(self, other) -> "Scalar":
        other = as_scalar(other)
        if not other._t:
            return self
        if not self._t:
            return other
        t = dict(self._t)
        for m, (b, c) in other._t.items():
            old = t.get(m)
            if old is None:
                t[m] = (b, c)
            else:
                re, im = old[0] + b, old[1] + c
                if re == 0 and im == 0:
                    del t[m]
                else:
                    t[m] = (re, im)
        return Scalar._raw(t)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar._raw({m: (-a, -b) for m, (a, b) in self._t.items()})

    def __sub__(self, other) -> "Scalar":
        return self + (-as_scalar(other))

    def __rsub__(self, other) -> "Scalar":
        return as_scalar(other) - self

    def __mul__(self, other) -> "Scalar":
        other = as_scalar(other)
        if not self._t or not other._t:
            return Scalar._raw({})
        t: dict = {}
        for m1, (a, b) in self._t.items():
            for m2, (c, d) in other._t.items():
                m = _mono_mul(m1, m2)
                re, im = a * c - b * d, a * d + b * c
                old = t.get(m)
                if old is not None:
                    re, im = old[0] + re, old[1] + im
                t[m] = (re, im)
        return Scalar._raw({m: v for m, v in t.items() if v[0] != 0 or v[1] != 0})

    __rmul__ = __mul__

    def scale(self, re, im=0) -> "Scalar":
        """Multiply by the Gaussian rational ``re + i*im`` (fast path)."""
        if re == 0 and im == 0:
            return Scalar._raw({})
        if im == 0:
            if re == 1:
                return self
            return Scalar._raw({m: (a * re, b * re) for m, (a, b) in self._t.items()})
        return Scalar._raw(
            {m: (a * re - b * im, a * im + b * re) for m, (a, b) in self._t.items()}
        )

    def inverse(self) -> "Scalar":
        re, im = self.constant()
        n = re * re + im * im
        if n == 0:
            raise ZeroDivisionError("inverse of zero scalar")
        return Scalar.const(re / n, -im / n)

    def __truediv__(self, other) -> "Scalar":
        other = as_scalar(other)
        if not other.is_constant():
            raise ValueError("division by a non-constant polynomial is not supported")
        re, im = other.inverse().constant()
        return self.scale(re, im)

    def __rtruediv__(self, other) -> "Scalar":
        return as_scalar(other) / self

    def __pow__(self, k: int) -> "Scalar":
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> "Scalar":
        return Scalar._raw({_mono_conj(m): (a, -b) for m, (a, b) in self._t.items()})

    def re(self) -> "Scalar":
        return (self + self.conj()).scale(Q(1, 2))

    def im(self) -> "Scalar":
        return (self - self.conj()).scale(0, Q(-1, 2))

    def abs2(self) -> "Scalar":
        return self * self.conj()

    # ------------------------------------------------------------ comparison
    def __eq__(self, other) -> bool:
        try:
            other = as_scalar(other)
        except TypeError:
            return NotImplemented
        return self._t == other._t

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    # ------------------------------------------------------------ substitute
    def subs(self, assignment: Mapping[str, Number]) -> "Scalar":
        """Substitute symbols (conjugates are *not* filled in automatically)."""
        if not assignment:
            return self
        vals = {k: as_scalar(v) for k, v in assignment.items()}
        out = Scalar._raw({})
        cache: dict = {}
        for m, (a, b) in self._t.items():
            term = Scalar._raw({(): (a, b)})
            rest = []
            for v, e in m:
                if v in vals:
                    key = (v, e)
                    if key not in cache:
                        cache[key] = vals[v] ** e
                    term = term * cache[key]
                else:
                    rest.append((v, e))
            if rest:
                term = term * Scalar._raw({tuple(rest): (_ONE, _ZERO)})
            out = out + term
        return out

    def evaluate(self, assignment: Mapping[str, Number]) -> "Scalar":
        """Evaluate at a point, filling in conjugates and checking consistency."""
        full = conjugate_closure(assignment)
        missing = self.free_symbols() - set(full)
        if missing:
            raise KeyError(f"missing values for parameters: {sorted(missing)}")
        return self.subs(full)

    def diff(self, name: str) -> "Scalar":
        t: dict = {}
        for m, (a, b) in self._t.items():
            d = dict(m)
            e = d.get(name)
            if not e:
                continue
            if e == 1:
                del d[name]
            else:
                d[name] = e - 1
            nm = tuple(sorted(d.items(), key=lambda kv: _sort_key(kv[0])))
            old = t.get(nm, (_ZERO, _ZERO))
            t[nm] = (old[0] + a * e, old[1] + b * e)
        return Scalar._raw({m: v for m, v in t.items() if v[0] != 0 or v[1] != 0})

    # -------------------------------------------------------------- printing
    def sorted_terms(self) -> list:
        return sorted(self._t.items(), key=lambda kv: _mono_key(kv[0]))

    def __str__(self) -> str:
        if not self._t:
            return "0"
        parts = []
        for m, (a, b) in self.sorted_terms():
            mono = "*".join(v if e == 1 else f"{v}**{e}" for v, e in m)
            if not mono:
                parts.append(_fmt_gauss(a, b, bare=True))
                continue
            if b == 0 and a == 1:
                parts.append(mono)
            elif b == 0 and a == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{_fmt_gauss(a, b)}*{mono}")
        s = parts[0]
        for p in parts[1:]:
            s += " - " + p[1:] if p.startswith("-") else " + " + p
        return s

    def __repr__(self) -> str:
        return f"Scalar({str(self)!r})"


def _fmt_q(x) -> str:
    n, d = int(x.numerator), int(x.denominator)
    return str(n) if d == 1 else f"{n}/{d}"


def _fmt_gauss(a, b, bare: bool = False) -> str:
    if b == 0:
        s = _fmt_q(a)
        return s if bare or "/" not in s else f"({s})"
    if a == 0:
        s = "i" if b == 1 else "-i" if b == -1 else f"{_fmt_q(b)}*i"
        return s if bare or s in ("i", "-i") else f"({s})"
    sign = "-" if b < 0 else "+"
    bb = -b if b < 0 else b
    im = "i" if bb == 1 else f"{_fmt_q(bb)}*i"
    s = f"{_fmt_q(a)}{sign}{im}"
    return s if bare else f"({s})"


def as_scalar(x) -> Scalar:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Rational)) or type(x).__name__ == "mpq":
        return Scalar.const(x, 0)
    if isinstance(x, complex):
        return Scalar.from_number(x)
    raise TypeError(f"cannot convert {type(x).__name__} to Scalar")


def conjugate_closure(assignment: Mapping[str, Number]) -> dict[str, Scalar]:
    """Extend an assignment with conjugate values; reject inconsistent input."""
    full: dict[str, Scalar] = {}
    for k, v in assignment.items():
        v = as_scalar(v)
        if not v.is_constant():
            raise ValueError(f"value for {k} must be parameter-free")
        full[k] = v
    for k, v in list(full.items()):
        ck = conj_name(k)
        cv = v.conj()
        if ck in full:
            if full[ck] != cv:
                raise ValueError(f"inconsistent conjugate assignment for {k} and {ck}")
        else:
            full[ck] = cv
    return full


def gauss(re, im=0) -> Scalar:
    return Scalar.const(re, im)


def symbols(names: Iterable[str] | str, real: bool = False) -> list[Scalar]:
    if isinstance(names, str):
        names = names.replace(",", " ").split()
    return [Scalar.symbol(n, real=real) for n in names]


ZERO = Scalar.const(0)
ONE = Scalar.const(1)
I = Scalar.const(0, 1)
PI = Scalar.symbol("pi")
HALF = Scalar.const(Q(1, 2))
