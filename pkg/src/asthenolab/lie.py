"""Lie algebras described by the Chevalley-Eilenberg differential.

Sign convention: ``de^k(X, Y) = -e^k([X, Y])``, so ``de^3 = e^12`` means
``[e_1, e_2] = -e_3``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .forms import DimensionMismatch, Form, canonical
from .scalar import Scalar


class JacobiError(ValueError):
    pass


class NotClosed(ValueError):
    pass


@dataclass(frozen=True)
class JacobiVerdict:
    holds: bool
    index: int | None = None  # 0-based basis 1-form where d^2 fails
    witness: Form | None = None

    def __bool__(self) -> bool:
        return self.holds


class LieAlgebra:
    """Real (or complexified) Lie algebra given by ``d`` on basis 1-forms."""

    def __init__(self, d_images: Sequence[Form], name: str | None = None):
        d_images = list(d_images)
        self.dim = len(d_images)
        for k, f in enumerate(d_images):
            if f.dim != self.dim:
                raise DimensionMismatch(f"d(e^{k + 1}) lives in dimension {f.dim}, expected {self.dim}")
            if f and f.degrees() != {2}:
                raise ValueError(f"d(e^{k + 1}) must be a 2-form, got {f}")
        self.d_images = tuple(d_images)
        self.name = name
        self._dd = [dict(f.items()) for f in d_images]

    @classmethod
    def abelian(cls, dim: int, name: str | None = None) -> "LieAlgebra":
        return cls([Form.zero(dim)] * dim, name=name)

    def __repr__(self) -> str:
        inner = ", ".join(str(f) for f in self.d_images)
        return f"LieAlgebra({self.name or ''}({inner}))"

    def __eq__(self, other) -> bool:
        return isinstance(other, LieAlgebra) and self.d_images == other.d_images

    def __hash__(self) -> int:
        return hash(self.d_images)

    def salamon(self) -> str:
        return "(" + ",".join(str(f) for f in self.d_images) + ")"

    def free_symbols(self) -> set[str]:
        out: set[str] = set()
        for f in self.d_images:
            out |= f.free_symbols()
        return out

    def evaluate(self, assignment) -> "LieAlgebra":
        return LieAlgebra([f.evaluate(assignment) for f in self.d_images], name=self.name)

    # ------------------------------------------------------------ d
    def d(self, a: Form) -> Form:
        """Exterior derivative of an invariant form (antiderivation, degree +1)."""
        if a.dim != self.dim:
            raise DimensionMismatch(f"form of dimension {a.dim} on algebra of dimension {self.dim}")
        dd = self._dd
        t: dict = {}
        for k, c in a.items():
            for pos, idx in enumerate(k):
                images = dd[idx]
                if not images:
                    continue
                head, tail = k[:pos], k[pos + 1:]
                for pair, coef in images.items():
                    key, sgn = canonical(head + pair + tail)
                    if sgn == 0:
                        continue
                    val = c * coef
                    if (sgn < 0) != bool(pos & 1):
                        val = -val
                    old = t.get(key)
                    t[key] = val if old is None else old + val
        return Form._raw(self.dim, {k: v for k, v in t.items() if v})

    def check_jacobi(self) -> JacobiVerdict:
        for k, f in enumerate(self.d_images):
            w = self.d(f)
            if w:
                return JacobiVerdict(False, k, w)
        return JacobiVerdict(True)

    # ------------------------------------------------------------ brackets
    def structure_constant(self, k: int, a: int, b: int) -> Scalar:
        """``e^k([e_a, e_b])`` (0-based)."""
        return -self.d_images[k].coeff0((a, b))

    def structure_constants(self) -> list:
        """``c[k][a][b] = e^k([e_a, e_b])``."""
        n = self.dim
        c = [[[Scalar.const(0)] * n for _ in range(n)] for _ in range(n)]
        for k, f in enumerate(self.d_images):
            for (a, b), v in f.items():
                c[k][a][b] = -v
                c[k][b][a] = v
        return c

    def bracket(self, x: Sequence, y: Sequence) -> list[Scalar]:
        """Bracket of two vectors given by frame components."""
        return [-(f(x, y)) for f in self.d_images]

    def dual_description(self) -> dict[tuple[int, int], list[Scalar]]:
        """Nonzero brackets ``[e_a, e_b]`` for ``a < b`` (0-based keys)."""
        verdict = self.check_jacobi()
        if not verdict:
            raise JacobiError(f"Jacobi identity fails at d(e^{verdict.index + 1})")
        table: dict = {}
        for k, f in enumerate(self.d_images):
            for (a, b), v in f.items():
                table.setdefault((a, b), [Scalar.const(0)] * self.dim)
                table[(a, b)][k] = -v
        return {k: v for k, v in sorted(table.items()) if any(v)}

    # ------------------------------------------------------------ extensions
    def central_extension(self, omegas: Sequence[Form], name: str | None = None) -> "LieAlgebra":
        """Add central generators with ``d e^{N+i} = omegas[i]``."""
        n = self.dim
        r = len(omegas)
        for i, om in enumerate(omegas):
            if om.dim != n:
                raise DimensionMismatch("extension forms must live on the base algebra")
            if om and om.degrees() != {2}:
                raise ValueError("extension forms must be 2-forms")
            w = self.d(om)
            if w:
                raise NotClosed(f"omega_{i + 1} is not closed: d omega = {w}")
        images = [f.embed(n + r) for f in self.d_images] + [om.embed(n + r) for om in omegas]
        return LieAlgebra(images, name=name)

    def truncate(self, dim: int) -> "LieAlgebra":
        """Drop the last generators (inverse of :meth:`central_extension`)."""
        images = [f.restrict(dim) for f in self.d_images[:dim]]
        for k, (f, g) in enumerate(zip(self.d_images[:dim], images)):
            if len(f.terms) != len(g.terms):
                raise ValueError(f"d(e^{k + 1}) involves removed generators")
        return LieAlgebra(images, name=self.name)

    def is_nilpotent_in_basis(self) -> bool:
        """True when the frame is adapted to a nilpotent filtration.

        Each ``d e^k`` must only involve generators already known to sit in a
        lower step; this is sufficient for nilpotency but basis dependent.
        """
        n = self.dim
        known: set[int] = set()
        progress = True
        while progress:
            progress = False
            for k, f in enumerate(self.d_images):
                if k in known:
                    continue
                if all(set(key) <= known for key in f.terms):
                    known.add(k)
                    progress = True
        return len(known) == n
