"""Text format for structure equations, complex structures and metrics.

Salamon tuples ``(0,0,0,0,e12,e34)`` or blocks::

    params a, b;            # complex parameters; "params real t;" for real ones
    algebra 6 { d e5 = e12; d e6 = e34; }
    complex { d w3 = a*w1~1 + ~w2^w1; }    # (1,0)-coframe equations
    coframe { e1 + i*e4; e2 + i*e3; e5 + i*e6; }
    jmatrix [[0,-1],[1,0]]  # columns are the images J e_k
    metric diag(1,1,2,2,1,1) | metric hdiag(2,3,4,5) | metric matrix [[..],..]

In ``e``-monomials every digit is one index (``e21`` is ``-e12``); use
``e1^e10`` beyond nine.  ``w1~2`` is ``w^1 ^ conj w^2`` and ``~`` in front of
an expression conjugates it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .forms import Form, canonical
from .hermitian import ComplexStructure, HermitianStructure
from .lie import LieAlgebra
from .scalar import I, PI, Scalar, as_scalar, is_real_symbol


class DSLError(ValueError):
    def __init__(self, msg: str, line: int | None = None, col: int | None = None):
        where = f"line {line}, column {col}: " if line is not None else ""
        super().__init__(where + msg)
        self.line, self.col = line, col


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<emono>e\d+(?:\^e\d+)*)(?![A-Za-z_])
  | (?P<wmono>w\d*(?:~\d+)?)(?![A-Za-z_])
  | (?P<num>\d+(?:\.\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*~?)
  | (?P<op>\*\*|[-+*/^(),;{}\[\]=~])
    """,
    re.VERBOSE,
)

KEYWORDS = {"algebra", "complex", "coframe", "jmatrix", "metric", "params", "real", "d", "diag", "hdiag", "matrix"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos, line, lstart = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise DSLError(f"unexpected character {text[pos]!r}", line, pos - lstart + 1)
        kind = m.lastgroup
        tok = m.group()
        if kind != "ws":
            out.append(Token(kind, tok, line, pos - lstart + 1))
        nl = tok.count("\n")
        if nl:
            line += nl
            lstart = pos + tok.rfind("\n") + 1
        pos = m.end()
    out.append(Token("eof", "", line, pos - lstart + 1))
    return out


@dataclass
class MetricSpec:
    kind: str  # "diag", "hdiag" or "matrix"
    values: list

    def build(self, cs: ComplexStructure) -> HermitianStructure:
        N = cs.algebra.dim
        if self.kind == "hdiag":
            return HermitianStructure.diagonal(cs, self.values)
        if self.kind == "diag":
            if len(self.values) != N:
                raise DSLError(f"diag metric needs {N} entries")
            return HermitianStructure(cs, [[self.values[i] if i == j else 0 for j in range(N)] for i in range(N)])
        return HermitianStructure(cs, self.values)

    def to_text(self) -> str:
        if self.kind == "matrix":
            return "metric matrix [" + ", ".join("[" + ", ".join(map(_scalar_text, r)) + "]" for r in self.values) + "]"
        return f"metric {self.kind}(" + ", ".join(map(_scalar_text, self.values)) + ")"


@dataclass
class Parsed:
    algebra: LieAlgebra | None = None
    complex_structure: ComplexStructure | None = None
    metric: MetricSpec | None = None
    params: dict = field(default_factory=dict)

    def hermitian(self, metric: MetricSpec | None = None) -> HermitianStructure:
        cs = self.structure()
        spec = metric or self.metric
        if spec is None:
            return HermitianStructure.diagonal(cs)
        return spec.build(cs)

    def structure(self) -> ComplexStructure:
        if self.complex_structure is not None:
            return self.complex_structure
        if self.algebra is None:
            raise DSLError("no algebra given")
        if self.algebra.dim % 2:
            raise DSLError("odd-dimensional algebra has no complex structure")
        return ComplexStructure.standard(self.algebra)


class Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.params: dict[str, Scalar] = {}
        self.dim: int | None = None
        self.complex_n: int | None = None  # set while reading w-monomials

    # -------------------------------------------------------- token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        raise DSLError(msg, tok.line, tok.col)

    def accept(self, text: str) -> bool:
        if self.tok.text == text and self.tok.kind in ("op", "ident"):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if not (self.tok.text == text and self.tok.kind in ("op", "ident")):
            self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        t = self.tok
        self.i += 1
        return t

    def integer(self) -> int:
        t = self.tok
        if t.kind != "num" or "." in t.text:
            self.error("expected an integer")
        self.i += 1
        return int(t.text)

    # -------------------------------------------------------- file
    def parse(self) -> Parsed:
        out = Parsed()
        while self.tok.kind != "eof":
            t = self.tok
            if t.text == "(":
                if out.algebra is not None:
                    self.error("algebra given twice")
                out.algebra = self.salamon()
            elif t.text == "params":
                self.i += 1
                self.param_decl()
            elif t.text == "algebra":
                if out.algebra is not None:
                    self.error("algebra given twice")
                self.i += 1
                out.algebra = self.algebra_block()
            elif t.text == "complex":
                self.i += 1
                out.complex_structure = self.complex_block(out)
                out.algebra = out.complex_structure.algebra
            elif t.text == "coframe":
                self.i += 1
                out.complex_structure = self.coframe_block(out)
            elif t.text == "jmatrix":
                self.i += 1
                if out.algebra is None:
                    self.error("jmatrix needs an algebra first")
                rows = self.matrix()
                try:
                    out.complex_structure = ComplexStructure.from_matrix(out.algebra, rows)
                except ValueError as exc:
                    self.error(str(exc), t)
            elif t.text == "metric":
                self.i += 1
                out.metric = self.metric()
            else:
                self.error(f"unexpected {t.text!r}")
            self.accept(";")
        out.params = dict(self.params)
        if out.complex_structure is not None and out.algebra is not None and out.algebra.dim % 2:
            self.error("odd dimension with a complex structure")
        return out

    def param_decl(self) -> None:
        real = self.accept("real")
        while True:
            t = self.tok
            if t.kind != "ident" or t.text in KEYWORDS or t.text in ("i", "pi") or t.text.endswith("~"):
                self.error("expected a parameter name")
            self.i += 1
            self.params[t.text] = Scalar.symbol(t.text, real=real)
            if not self.accept(","):
                break
        self.accept(";")

    def salamon(self) -> LieAlgebra:
        start = self.i
        depth, count = 0, 1
        j = self.i
        while True:  # count top-level commas to learn the dimension first
            t = self.toks[j]
            if t.kind == "eof":
                self.error("unterminated tuple", self.toks[start])
            if t.text in "([":
                depth += 1
            elif t.text in ")]":
                depth -= 1
                if depth == 0:
                    break
            elif t.text == "," and depth == 1:
                count += 1
            j += 1
        self.dim = count
        self.expect("(")
        images = []
        for k in range(count):
            images.append(self.form_expr())
            if k < count - 1:
                self.expect(",")
        self.expect(")")
        return self._algebra(images)

    def algebra_block(self) -> LieAlgebra:
        self.dim = self.integer()
        images = [Form.zero(self.dim) for _ in range(self.dim)]
        self.expect("{")
        while not self.accept("}"):
            self.expect("d")
            t = self.tok
            if t.kind != "emono" or "^" in t.text[1:] and t.text.count("e") != 1:
                self.error("expected a basis 1-form like e5")
            idx = self.emono_indices(t)
            if len(idx) != 1:
                self.error("left side must be a single basis 1-form", t)
            self.i += 1
            self.expect("=")
            images[idx[0]] = self.form_expr()
            self.expect(";")
        return self._algebra(images)

    def _algebra(self, images) -> LieAlgebra:
        for k, f in enumerate(images):
            if not isinstance(f, Form):
                if as_scalar(f):
                    self.error(f"d(e{k + 1}) must be a 2-form")
                images[k] = Form.zero(self.dim)
        try:
            return LieAlgebra(images)
        except ValueError as exc:
            self.error(str(exc))

    def complex_block(self, out: Parsed) -> ComplexStructure:
        if out.algebra is not None and out.algebra.dim % 2:
            self.error("odd-dimensional algebra has no complex structure", self.toks[self.i - 1])
        n = out.algebra.dim // 2 if out.algebra is not None else None
        self.expect("{")
        eqs: dict[int, Form] = {}
        start = self.i
        # first pass: find n from the largest w-index if no algebra is known
        if n is None:
            j, top = self.i, 0
            while self.toks[j].text != "}" and self.toks[j].kind != "eof":
                if self.toks[j].kind == "wmono":
                    top = max([top] + [int(c) for c in re.findall(r"\d", self.toks[j].text)])
                j += 1
            n = top
        self.complex_n, self.dim = n, 2 * n
        self.i = start
        while not self.accept("}"):
            self.expect("d")
            t = self.tok
            if t.kind != "wmono" or "~" in t.text or len(t.text) != 2:
                self.error("expected a (1,0)-form like w3")
            k = int(t.text[1]) - 1
            if not 0 <= k < n:
                self.error("index out of range", t)
            self.i += 1
            self.expect("=")
            eqs[k] = self.form_expr()
            self.expect(";")
        self.complex_n = None
        d_eta = []
        for k in range(n):
            f = eqs.get(k, Form.zero(2 * n))
            d_eta.append(f if isinstance(f, Form) else Form.zero(2 * n))
        try:
            return ComplexStructure.from_equations(d_eta)
        except ValueError as exc:
            self.error(str(exc))

    def coframe_block(self, out: Parsed) -> ComplexStructure:
        if out.algebra is None:
            self.error("coframe needs an algebra first")
        self.dim = out.algebra.dim
        self.expect("{")
        forms = []
        while not self.accept("}"):
            forms.append(self.form_expr())
            if not self.accept(";"):
                self.accept(",")
        try:
            return ComplexStructure(out.algebra, forms)
        except ValueError as exc:
            self.error(str(exc))

    def matrix(self) -> list:
        self.expect("[")
        rows = []
        while True:
            self.expect("[")
            row = [self.scalar_expr()]
            while self.accept(","):
                row.append(self.scalar_expr())
            self.expect("]")
            rows.append(row)
            if not self.accept(","):
                break
        self.expect("]")
        return rows

    def metric(self) -> MetricSpec:
        t = self.tok
        if self.accept("diag") or self.accept("hdiag"):
            kind = t.text
            self.expect("(")
            vals = [self.scalar_expr()]
            while self.accept(","):
                vals.append(self.scalar_expr())
            self.expect(")")
            return MetricSpec(kind, vals)
        if self.accept("matrix"):
            return MetricSpec("matrix", self.matrix())
        self.error("expected diag(...), hdiag(...) or matrix [...]")

    # -------------------------------------------------------- expressions
    def scalar_expr(self) -> Scalar:
        t = self.tok
        v = self.expr()
        if isinstance(v, Form):
            self.error("expected a scalar", t)
        return v

    def form_expr(self):
        return self.expr()

    def expr(self):
        v = self.term()
        while self.tok.text in ("+", "-") and self.tok.kind == "op":
            op = self.tok
            self.i += 1
            w = self.term()
            v = self._add(v, w, op, sign=1 if op.text == "+" else -1)
        return v

    def term(self):
        v = self.unary()
        while self.tok.text in ("*", "/", "^") and self.tok.kind == "op":
            op = self.tok
            self.i += 1
            w = self.unary()
            if op.text == "/":
                if isinstance(w, Form):
                    self.error("cannot divide by a form", op)
                if not w.is_constant() or not w:
                    self.error("division needs a nonzero number", op)
                v = v * w.inverse() if isinstance(v, Form) else v / w
            elif isinstance(v, Form) and isinstance(w, Form):
                v = v.wedge(w)
            elif op.text == "^":
                self.error("^ joins forms", op)
            elif isinstance(w, Form):
                v = w * v
            else:
                v = v * w
        return v

    def unary(self):
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        if self.accept("~"):
            return self._conj(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.tok.text == "**":
            op = self.tok
            self.i += 1
            k = self.integer()
            if isinstance(base, Form):
                return base.power(k)
            if k < 0:
                self.error("negative powers are not supported", op)
            return base ** k
        return base

    def atom(self):
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return Scalar.const(Fraction(t.text))
        if t.kind == "emono":
            self.i += 1
            if self.complex_n is not None:
                self.error("use w-monomials inside a complex block", t)
            idx = self.emono_indices(t)
            key, sgn = canonical(tuple(idx))
            if sgn == 0:
                self.error(f"repeated index in {t.text}", t)
            return Form(self.dim, {key: sgn})
        if t.kind == "wmono":
            self.i += 1
            return self.wmono(t)
        if t.kind == "ident":
            self.i += 1
            name = t.text
            if name == "i":
                return I
            if name == "pi":
                return PI
            conj = name.endswith("~")
            base = name.rstrip("~")
            if base not in self.params:
                self.error(f"undeclared parameter {base!r}", t)
            v = self.params[base]
            return v.conj() if conj else v
        if self.accept("("):
            v = self.expr()
            self.expect(")")
            return v
        self.error(f"unexpected {t.text or 'end of input'!r}")

    def emono_indices(self, t: Token) -> list[int]:
        if self.dim is None:
            self.error("dimension unknown", t)
        parts = t.text.split("^")
        if len(parts) == 1:
            idx = [int(c) - 1 for c in parts[0][1:]]
        else:
            idx = [int(p[1:]) - 1 for p in parts]
        for k in idx:
            if not 0 <= k < self.dim:
                self.error(f"index out of range in {t.text}", t)
        return idx

    def wmono(self, t: Token) -> Form:
        n = self.complex_n
        if n is None:
            self.error("w-monomials are only allowed in a complex block", t)
        head, _, tail = t.text[1:].partition("~")
        idx = [int(c) - 1 for c in head] + [int(c) - 1 + n for c in tail]
        if not idx:
            self.error("empty w-monomial", t)
        for k in idx:
            if not 0 <= k < 2 * n:
                self.error(f"index out of range in {t.text}", t)
        key, sgn = canonical(tuple(idx))
        if sgn == 0:
            self.error(f"repeated index in {t.text}", t)
        return Form(2 * n, {key: sgn})

    def _conj(self, v):
        if isinstance(v, Form):
            if self.complex_n is None:
                return v.conjugate()
            n = self.complex_n
            return v.conjugate([(m + n) % (2 * n) for m in range(2 * n)])
        return v.conj()

    def _add(self, v, w, op, sign):
        if isinstance(v, Form) != isinstance(w, Form):
            # a scalar next to a form is its 0-form part
            if isinstance(v, Form):
                w = Form.scalar(v.dim, w) if w else Form.zero(v.dim)
            else:
                v = Form.scalar(w.dim, v) if v else Form.zero(w.dim)
        return v + w if sign > 0 else v - w


def parse(text: str) -> Parsed:
    return Parser(text).parse()


def parse_form(text: str, dim: int, params: dict | None = None) -> Form:
    p = Parser(text)
    p.dim = dim
    p.params = dict(params or {})
    v = p.expr()
    if p.tok.kind != "eof":
        p.error(f"unexpected {p.tok.text!r}")
    return v if isinstance(v, Form) else Form.scalar(dim, v) if v else Form.zero(dim)


def parse_scalar(text: str, params: dict | None = None) -> Scalar:
    p = Parser(text)
    p.params = dict(params or {})
    v = p.scalar_expr()
    if p.tok.kind != "eof":
        p.error(f"unexpected {p.tok.text!r}")
    return v


# ------------------------------------------------------------------ printing
def _scalar_text(x) -> str:
    return str(as_scalar(x))


def form_text(f: Form) -> str:
    return f.to_str()


def algebra_text(alg: LieAlgebra) -> str:
    lines = [f"algebra {alg.dim} {{"]
    for k, f in enumerate(alg.d_images):
        if f:
            lines.append(f"  d {_basis(k)} = {form_text(f)};")
    lines.append("}")
    return "\n".join(lines)


def _basis(k: int) -> str:
    return f"e{k + 1}"


def to_text(hs: HermitianStructure, params: dict | None = None) -> str:
    """Serialize algebra, coframe and metric; ``parse`` reads it back."""
    cs = hs.cs
    names = sorted({s.rstrip("~") for s in cs.free_symbols() | _metric_symbols(hs)} - {"pi"})
    out = []
    real = [n for n in names if is_real_symbol(n)]
    cplx = [n for n in names if not is_real_symbol(n)]
    if cplx:
        out.append("params " + ", ".join(cplx) + ";")
    if real:
        out.append("params real " + ", ".join(real) + ";")
    out.append(algebra_text(cs.algebra))
    out.append("coframe {")
    for f in cs.coframe:
        out.append(f"  {form_text(f)};")
    out.append("}")
    N = hs.dim
    g = hs.g
    if all(not g[a][b] for a in range(N) for b in range(N) if a != b):
        out.append(MetricSpec("diag", [g[a][a] for a in range(N)]).to_text())
    else:
        out.append(MetricSpec("matrix", g).to_text())
    return "\n".join(out) + "\n"


def _metric_symbols(hs: HermitianStructure) -> set[str]:
    out: set[str] = set()
    for row in hs.g:
        for x in row:
            out |= x.free_symbols()
    return out
