"""Registry of concrete structures with their expected verdicts.

Every expectation carries a source tag: ``reference`` for tabulated values,
``derived`` for values fixed by an independent computation here (search
witnesses, engine-derived forms) and ``trivial`` for sanity facts.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Callable

from . import connections as conn
from .families import Family8, SKTFrame
from .forms import Form
from .hermitian import CONDITIONS, ComplexStructure, HermitianStructure
from .lie import LieAlgebra
from .scalar import I, PI, Q, Scalar, as_scalar

SOURCES = ("reference", "derived", "trivial")


@dataclass(frozen=True)
class Expectation:
    key: str
    value: object  # bool, Form or Scalar
    source: str

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ValueError(f"unknown source {self.source!r}")


@dataclass
class CatalogEntry:
    name: str
    locus: str
    builder: Callable[[], HermitianStructure]
    expectations: tuple[Expectation, ...] = ()
    reference: str | None = None  # tabulated Salamon form when the frame differs
    notes: str = ""

    @cached_property
    def hermitian(self) -> HermitianStructure:
        return self.builder()

    @property
    def complex_structure(self) -> ComplexStructure:
        return self.hermitian.cs

    @property
    def algebra(self) -> LieAlgebra:
        return self.hermitian.cs.algebra


class UnknownEntry(KeyError):
    pass


# ------------------------------------------------------------------ probes
_CONN = {"bismut": conn.bismut, "chern": conn.chern, "lc": conn.levi_civita, "canonical": conn.first_canonical}
_PROBE = re.compile(r"^(?P<conn>bismut|chern|lc|canonical)\.(?P<what>omega|tau|Omega|trRR|trJR|trR)(?:\[(?P<args>[\d,]+)\])?$")
_DDBAR = re.compile(r"^ddbarF\^(\d+)$")


def _unit(n: int, i: int) -> list:
    return [1 if k == i else 0 for k in range(n)]


class Prober:
    """Evaluates expectation keys on one Hermitian structure, caching connections."""

    def __init__(self, hs: HermitianStructure):
        self.hs = hs
        self._conns: dict = {}

    def connection(self, name: str) -> conn.ConnectionData:
        if name not in self._conns:
            self._conns[name] = _CONN[name](self.hs)
        return self._conns[name]

    def __call__(self, key: str):
        hs = self.hs
        cs = hs.cs
        if key == "jacobi":
            return cs.algebra.check_jacobi().holds
        if key == "integrable":
            return cs.integrable
        if key in CONDITIONS:
            return hs.check_condition(key).holds
        if key == "F":
            return hs.F
        if key == "dF":
            return hs.dF
        if key == "JdF":
            return cs.J_form(hs.dF)
        if key == "torsion_c":
            return hs.torsion_c()
        if key == "lee_form":
            return hs.lee_form()
        if key == "d_lee":
            return cs.algebra.d(hs.lee_form())
        if key == "d_JdF":
            return cs.algebra.d(cs.J_form(hs.dF))
        m = _DDBAR.match(key)
        if m:
            return hs.ddbar_F_power(int(m.group(1)))
        m = _PROBE.match(key)
        if not m:
            raise KeyError(f"unknown probe {key!r}")
        c = self.connection(m.group("conn"))
        what = m.group("what")
        args = [int(x) - 1 for x in m.group("args").split(",")] if m.group("args") else []
        if what == "omega":
            return c.omega[args[0]][args[1]]
        if what == "Omega":
            return c.curvature[args[0]][args[1]]
        if what == "tau":
            return c.torsion[args[0]]
        if what == "trRR":
            return conn.trace_R_wedge_R(c)
        N = hs.dim
        x, y = _unit(N, args[0]), _unit(N, args[1])
        return conn.trace_J_R(c, x, y) if what == "trJR" else conn.trace_R(c, x, y)


@dataclass(frozen=True)
class Check:
    key: str
    expected: object
    actual: object
    source: str

    @property
    def match(self) -> bool:
        return self.expected == self.actual


@dataclass(frozen=True)
class VerifyReport:
    name: str
    checks: tuple[Check, ...]

    @property
    def ok(self) -> bool:
        return all(c.match for c in self.checks)

    @property
    def mismatches(self) -> tuple[Check, ...]:
        return tuple(c for c in self.checks if not c.match)


# ------------------------------------------------------------------ helpers
def _E(n: int):
    return lambda *ix: Form.e(n, *ix)


def _standard(d_images, name, metric=None) -> HermitianStructure:
    alg = LieAlgebra(d_images, name=name)
    cs = ComplexStructure.standard(alg)
    return HermitianStructure.identity(cs) if metric is None else HermitianStructure(cs, metric)


def _x(key, value, source="reference") -> Expectation:
    return Expectation(key, value, source)


# ------------------------------------------------------------------ 6-dimensional SKT witnesses
# One (A..E) tuple per algebra, found by a small search over {0, +-1, +-i, ...}
# satisfying |A|^2 + |D|^2 + |E|^2 + 2 Re(B~ C) = 0.
SKT_WITNESSES = {
    "h2": (SKTFrame(0, -1, -I, 0, 0), "(0,0,0,0,e12,e34)"),
    "h4": (SKTFrame(-1, -1, 1, 0, -1), "(0,0,0,0,e12,e14+e23)"),
    "h5": (SKTFrame(0, -1, 1, 0, Scalar.const(-1, -1)), "(0,0,0,0,e13+e42,e14+e23)"),
    "h8": (SKTFrame(0, -1, 0, 0, 0), "(0,0,0,0,0,e12)"),
}


def pencil_type(alg: LieAlgebra) -> str | None:
    """Isomorphism type of ``(0,0,0,0,a,b)`` with ``a, b`` in the first four directions.

    The binary form ``(s, t) -> Pf(s a + t b)`` separates the 2-step types:
    two real roots give h2, a double root h4, no real root h5; a
    one-dimensional span of rank 2 gives h8.
    """
    if alg.dim != 6 or any(alg.d_images[:4]) or alg.free_symbols():
        return None
    a, b = alg.d_images[4], alg.d_images[5]
    if any(max(k) > 3 for f in (a, b) for k in f.terms):
        return None

    def pf(w: Form) -> Scalar:
        return w.wedge(w).coeff0((0, 1, 2, 3)).scale(Q(1, 2))

    if not a and not b:
        return "abelian"
    keys = sorted(set(a.terms) | set(b.terms))
    rows = [[f.coeff0(k) for k in keys] for f in (a, b)]
    rank1 = all(rows[0][i] * rows[1][j] == rows[0][j] * rows[1][i] for i in range(len(keys)) for j in range(len(keys)))
    if rank1:
        w = a if a else b
        return "h8" if not pf(w) else "h3"
    A, C = pf(a), pf(b)
    B = pf(a + b) - A - C
    disc = (B * B - A * C.scale(4)).constant()[0]
    if disc > 0:
        return "h2"
    if disc == 0:
        return "h4" if (A or B or C) else None
    return "h5"


def _skt_entry(name: str) -> CatalogEntry:
    frame, salamon = SKT_WITNESSES[name]
    return CatalogEntry(
        name,
        "six-dimensional SKT classification",
        lambda: HermitianStructure.diagonal(frame.complex_structure()),
        (
            _x("jacobi", True, "trivial"),
            _x("integrable", True, "trivial"),
            _x("skt", True, "derived"),
            _x("kahler", False, "derived"),
        ),
        reference=salamon,
        notes="frame (A..E) = " + ", ".join(str(getattr(frame, k)) for k in "ABCDE"),
    )


# ------------------------------------------------------------------ g1..g5
def _g_algebras() -> dict[str, list[Form]]:
    E = _E(6)
    Z = Form.zero(6)
    hp = PI * Q(1, 2)
    return {
        "g1": [E(2, 3), E(3, 1), E(1, 2), Z, E(6, 4) * hp, E(4, 5) * hp],
        "g2": [E(1, 2), Z, E(1, 4), E(2, 4), E(2, 6) * hp, -E(2, 5) * hp],
        "g3": [Z, Z, E(1, 2), Z, E(4, 6) * hp, -E(4, 5) * hp],
        "g4": [E(2, 4), -E(1, 4), E(1, 2), Z, E(4, 6) * hp, -E(4, 5) * hp],
        "g5": [E(1, 3) * 2, -E(2, 3) * 2, -E(1, 2), Z, E(4, 6) * hp, -E(4, 5) * hp],
    }


G5_J = [
    [0, 0, -1, -1, 0, 0],
    [0, 0, -1, 1, 0, 0],
    [Q(1, 2), Q(1, 2), 0, 0, 0, 0],
    [Q(1, 2), Q(-1, 2), 0, 0, 0, 0],
    [0, 0, 0, 0, 0, -1],
    [0, 0, 0, 0, 1, 0],
]
G5_METRIC = [[2 if i == j and i in (2, 3) else 1 if i == j else 0 for j in range(6)] for i in range(6)]


def _g_entry(name: str) -> CatalogEntry:
    E = _E(6)
    d = _g_algebras()[name]
    base = (_x("jacobi", True, "trivial"), _x("integrable", True, "trivial"),
            _x("d_JdF", Form.zero(6)), _x("d_lee", Form.zero(6)), _x("kahler", False))
    if name == "g1":
        def build():
            alg = LieAlgebra(d, name=name)
            return HermitianStructure.identity(ComplexStructure(alg, [E(1) + E(4) * I, E(2) + E(3) * I, E(5) + E(6) * I]))
        return CatalogEntry(name, "six-dimensional Hopf-type algebra", build, base)
    if name == "g5":
        def build():
            alg = LieAlgebra(d, name=name)
            return HermitianStructure(ComplexStructure.from_matrix(alg, G5_J), G5_METRIC)
        extra = (
            _x("JdF", E(1, 2, 3) * 2 + E(1, 2, 4) * 2),
            _x("F", E(1, 3) + E(1, 4) + E(2, 3) - E(2, 4) + E(5, 6), "derived"),
        )
        return CatalogEntry(name, "six-dimensional example with non-standard J", build, base + extra,
                            notes="J taken literally from the tabulated matrix; F derived from it")
    extra: tuple = ()
    if name == "g4":
        hp = PI * Q(1, 2)
        e12 = E(1, 2)
        extra = (
            _x("JdF", -E(1, 2, 3)),
            _x("bismut.omega[1,2]", -E(3) + E(4)),
            _x("bismut.omega[5,6]", -E(4) * hp),
            _x("bismut.tau[1]", E(2, 3)),
            _x("bismut.tau[2]", -E(1, 3)),
            _x("bismut.tau[3]", e12),
            _x("bismut.Omega[1,2]", -e12),
            _x("bismut.trRR", Form.zero(6)),
            _x("chern.Omega[1,2]", e12 * Q(1, 2)),
            _x("chern.Omega[3,4]", -e12 * Q(1, 2)),
            _x("chern.Omega[5,6]", -e12),
            _x("chern.trJR[1,2]", -PI),
        )
    return CatalogEntry(name, "six-dimensional SKT and lcb example", lambda: _standard(d, name), base + extra,
                        notes="standard coframe e1+ie2, e3+ie4, e5+ie6")


# ------------------------------------------------------------------ other entries
def _astheno_8d_algebra() -> list[Form]:
    E = _E(8)
    Z = Form.zero(8)
    return [Z] * 6 + [
        (E(1, 3) + E(2, 4) - E(3, 5) - E(4, 6)) * 4,
        (E(2, 3) - E(1, 4) + E(4, 5) - E(3, 6) - E(1, 2) * 2 - E(5, 6) * 2) * 4,
    ]


def _entries() -> dict[str, CatalogEntry]:
    E6 = _E(6)
    out: dict[str, CatalogEntry] = {}
    for name in SKT_WITNESSES:
        out[name] = _skt_entry(name)
    out["no-skt-6d"] = CatalogEntry(
        "no-skt-6d", "nilmanifold without astheno-Kahler metrics",
        lambda: _standard([Form.zero(6)] * 5 + [E6(1, 2) + E6(3, 4)], "no-skt-6d"),
        (_x("integrable", True), _x("skt", False), _x("astheno", False), _x("kahler", False)),
    )
    out["astheno-8d"] = CatalogEntry(
        "astheno-8d", "explicit astheno-Kahler, non-SKT nilmanifold",
        lambda: _standard(_astheno_8d_algebra(), "astheno-8d"),
        (_x("integrable", True), _x("astheno", True), _x("skt", False), _x("kahler", False)),
    )
    special = {"a3": 2, "a5": 2, "a10": 2, "a12": 2}
    out["special-8d"] = CatalogEntry(
        "special-8d", "family member with ddbar F = ddbar F^2 = 0",
        lambda: Family8(special).metric(),
        (_x("integrable", True), _x("special", True), _x("astheno", True), _x("skt", True, "derived"),
         _x("ddbarF^1", Form.zero(8), "derived"), _x("ddbarF^2", Form.zero(8), "derived"),
         _x("ddbarF^3", Form.zero(8), "derived")),
        notes="a3 = a5 = a10 = a12 = 2",
    )
    # a generic solution of the astheno condition: weights (2,3,4,5) destroy it
    reweight = {"a1": 1, "a2": 1, "a3": 1, "a8": 1}
    out["reweight-8d"] = CatalogEntry(
        "reweight-8d", "family member whose astheno property depends on the metric",
        lambda: Family8(reweight).metric(),
        (_x("integrable", True, "trivial"), _x("astheno", True, "derived"), _x("skt", False, "derived")),
        notes="a1 = a2 = a3 = a8 = 1; with metric hdiag(2,3,4,5) it is not astheno",
    )
    for name in ("g1", "g2", "g3", "g4", "g5"):
        out[name] = _g_entry(name)
    out["iwasawa"] = CatalogEntry(
        "iwasawa", "bi-invariant complex structure, E = 1, Y = 0",
        lambda: HermitianStructure.diagonal(SKTFrame(E=1).complex_structure()),
        (_x("integrable", True), _x("skt", False), _x("balanced", True, "derived"), _x("kahler", False, "derived")),
    )
    out["abelian-6d"] = CatalogEntry(
        "abelian-6d", "flat torus",
        lambda: _standard([Form.zero(6)] * 6, "abelian-6d"),
        tuple(_x(k, True, "trivial") for k in ("jacobi", "integrable") + CONDITIONS),
    )
    out["family8"] = CatalogEntry(
        "family8", "12-parameter family of 8-dimensional nilpotent algebras",
        lambda: Family8().metric(),
        (_x("jacobi", True, "trivial"),),
        notes="symbolic parameters a1..a12",
    )
    out["skt-frame"] = CatalogEntry(
        "skt-frame", "6-dimensional SKT normal form",
        lambda: HermitianStructure.diagonal(SKTFrame.symbolic().complex_structure()),
        (_x("jacobi", True, "trivial"),),
        notes="symbolic parameters A..E",
    )
    return out


_REGISTRY: dict[str, CatalogEntry] | None = None


def _registry() -> dict[str, CatalogEntry]:
    global _REGISTRY
    if _REGISTRY is None:
        _REGISTRY = _entries()
    return _REGISTRY


def names() -> list[str]:
    return list(_registry())


def get(name: str) -> CatalogEntry:
    try:
        return _registry()[name]
    except KeyError:
        raise UnknownEntry(f"no catalog entry {name!r}; known: {', '.join(names())}") from None


def verify(name: str, sources: tuple[str, ...] = SOURCES) -> VerifyReport:
    entry = get(name)
    probe = Prober(entry.hermitian)
    checks = []
    for ex in entry.expectations:
        if ex.source not in sources:
            continue
        actual = probe(ex.key)
        expected = as_scalar(ex.value) if isinstance(ex.value, (int, Scalar)) and not isinstance(ex.value, bool) else ex.value
        checks.append(Check(ex.key, expected, actual, ex.source))
    return VerifyReport(name, tuple(checks))
