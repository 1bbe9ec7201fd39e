"""Command-line driver: ``asthenolab {check,derive,deform,twist,catalog}``.

Exit codes: 0 when every asserted condition holds (or nothing was asserted),
1 when an assertion fails, 2 on input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import catalog
from . import connections as conn
from . import families as fam
from .dsl import DSLError, MetricSpec, Parser, parse, parse_form, parse_scalar
from .forms import Form
from .hermitian import CONDITIONS, HermitianStructure
from .scalar import I, Q
from .twist import TwistError, TwistInput, build_twist, check_twist_conditions, flat_base, twist_torsion_identities

CONVENTIONS = {
    "d_on_one_forms": "de^k(X,Y) = -e^k([X,Y])",
    "fundamental_form": "F(X,Y) = g(JX,Y)",
    "j_on_forms": "(J a)(X1,...,Xp) = (-1)^p a(JX1,...,JXp)",
    "orientation": "e^1 ^ ... ^ e^N",
    "inner_product_constant": "determinant normalization, |e^I|^2 = 1 for orthonormal e",
    "torsion_3form": "c = -J dF",
    "lee_form": "theta = J d*F",
}


class InputError(Exception):
    pass


# ------------------------------------------------------------------ helpers
def s(x) -> str:
    return str(x)


def form_str(f: Form) -> str:
    return f.to_str() if f else "0"


def load_source(src: str) -> tuple[str, HermitianStructure | None, object]:
    """``catalog:NAME``, a file path or inline DSL text."""
    if src.startswith("catalog:"):
        try:
            entry = catalog.get(src.split(":", 1)[1])
        except KeyError as exc:
            raise InputError(str(exc)) from None
        return entry.name, entry.hermitian, None
    path = Path(src)
    text = path.read_text(encoding="utf-8") if path.is_file() else src
    name = path.stem if path.is_file() else "input"
    parsed = parse(text)
    return name, None, parsed


def load_hermitian(src: str, metric: str | None) -> tuple[str, HermitianStructure, dict]:
    name, hs, parsed = load_source(src)
    spec = parse_metric(metric, parsed.params if parsed else {}) if metric else None
    if parsed is None:
        if spec is not None:
            hs = spec.build(hs.cs)
        return name, hs, {}
    return name, parsed.hermitian(spec), parsed.params


def parse_metric(text: str, params: dict) -> MetricSpec:
    p = Parser("metric " + text)
    p.params = dict(params)
    p.i = 1
    spec = p.metric()
    if p.tok.kind != "eof":
        p.error(f"unexpected {p.tok.text!r}")
    return spec


def emit(doc, as_json: bool, out=None) -> None:
    out = out or sys.stdout
    if as_json:
        out.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
    else:
        _emit_text(doc, out, 0)


def _emit_text(doc, out, depth: int) -> None:
    pad = "  " * depth
    for k, v in doc.items():
        if isinstance(v, dict):
            out.write(f"{pad}{k}:\n")
            _emit_text(v, out, depth + 1)
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            out.write(f"{pad}{k}:\n")
            for item in v:
                out.write(f"{pad}  -\n")
                _emit_text(item, out, depth + 2)
        else:
            out.write(f"{pad}{k}: {json.dumps(v, ensure_ascii=False) if not isinstance(v, str) else v}\n")


# ------------------------------------------------------------------ check
def structure_report(name: str, hs: HermitianStructure, conditions=CONDITIONS, connections: bool = False) -> dict:
    cs = hs.cs
    jac = cs.algebra.check_jacobi()
    integ = cs.check_integrable()
    conds = {}
    for kind in conditions:
        try:
            v = hs.check_condition(kind)
        except ValueError as exc:
            conds[kind] = {"holds": None, "error": str(exc)}
            continue
        conds[kind] = {"holds": v.holds, "witness": form_str(v.witness) if v.witness is not None else "0"}
    doc = {
        "name": name,
        "dim": hs.dim,
        "jacobi": bool(jac.holds),
        "integrable": bool(integ.holds),
        "conditions": conds,
    }
    try:
        doc["lee_form"] = form_str(hs.lee_form())
    except ValueError as exc:
        doc["lee_form"] = None
        doc["lee_form_error"] = str(exc)
    doc["torsion_c"] = form_str(hs.torsion_c())
    if connections:
        doc["connections"] = connection_report(hs)
    doc["conventions"] = dict(CONVENTIONS)
    return doc


def connection_report(hs: HermitianStructure) -> dict:
    N = hs.dim
    out = {}
    e = lambda i: [1 if k == i else 0 for k in range(N)]  # noqa: E731
    for label, build in (("bismut", conn.bismut), ("chern", conn.chern)):
        c = build(hs)
        omega = {f"{i + 1},{j + 1}": form_str(c.omega[i][j]) for i in range(N) for j in range(i + 1, N) if c.omega[i][j]}
        tau = {str(i + 1): form_str(t) for i, t in enumerate(c.torsion) if t}
        curv = {f"{i + 1},{j + 1}": form_str(c.curvature[i][j]) for i in range(N) for j in range(i + 1, N) if c.curvature[i][j]}
        out[label] = {
            "omega": omega,
            "torsion": tau,
            "curvature": curv,
            "trace_R_wedge_R": form_str(conn.trace_R_wedge_R(c)),
            "trace_JR_e1_e2": s(conn.trace_J_R(c, e(0), e(1))),
        }
    return out


def cmd_check(args) -> int:
    name, hs, _ = load_hermitian(args.source, args.metric)
    asserted = args.conditions is not None
    kinds = CONDITIONS if not asserted else _condition_list(args.conditions)
    doc = structure_report(name, hs, kinds, args.connections)
    emit(doc, args.json)
    if asserted and not all(v.get("holds") for v in doc["conditions"].values()):
        return 1
    return 0


def _condition_list(text: str) -> tuple[str, ...]:
    kinds = tuple(k.strip() for k in text.split(",") if k.strip())
    bad = [k for k in kinds if k not in CONDITIONS]
    if bad:
        raise InputError(f"unknown condition(s) {bad}; choose from {', '.join(CONDITIONS)}")
    return kinds


# ------------------------------------------------------------------ derive
_STAR_BASED = {"balanced", "lcb"}


def derive_polynomials(hs: HermitianStructure, kind: str) -> list:
    """Distinct normalized coefficients of the condition's residual form."""
    if kind in _STAR_BASED and any(x.free_symbols() for row in hs.g for x in row):
        raise InputError(f"{kind} needs the Hodge star and is refused for a parameterized metric")
    v = hs.check_condition(kind)
    out = []
    for _, c in sorted(v.witness.items()) if v.witness else ():
        p, _ = fam.normalize_polynomial(c)
        if p not in out:
            out.append(p)
    return out


def cmd_derive(args) -> int:
    kind = args.condition
    if kind not in CONDITIONS:
        raise InputError(f"unknown condition {kind!r}")
    doc: dict = {"source": args.source, "condition": kind}
    if args.source == "family8":
        weights = [parse_scalar(w) for w in args.weights.split(",")] if args.weights else None
        if kind != "astheno":
            polys = derive_polynomials(fam.Family8().metric(weights), kind)
        else:
            d = fam.derive_astheno_condition(weights=weights)
            polys = [d.polynomial] if d.polynomial else []
            if weights is None:
                doc["matches_reference"] = d.polynomial == fam.astheno_condition_expected()
    elif args.source == "skt-frame":
        fr = fam.SKTFrame.symbolic()
        if kind == "skt":
            p, _ = fam.normalize_polynomial(fam.skt_condition_direct(fr))
            polys = [p] if p else []
            doc["matches_reference"] = p == fam.normalize_polynomial(fam.skt_condition(fr))[0]
        else:
            polys = derive_polynomials(HermitianStructure.diagonal(fr.complex_structure()), kind)
    else:
        _, hs, _ = load_hermitian(args.source, args.metric)
        polys = derive_polynomials(hs, kind)
    doc["polynomials"] = [s(p) for p in polys] or ["0"]
    emit(doc, args.json)
    return 0


# ------------------------------------------------------------------ deform
def _point(text: str) -> tuple:
    parts = [parse_scalar(t) for t in text.split(",")]
    if len(parts) != 4:
        raise InputError("--point needs four values a,b,c,f")
    return tuple(parts)


def cmd_deform(args) -> int:
    rho = args.rho
    G = parse_scalar(args.G)
    # without --H take the SKT base with Im H = 1 (Im H = 0 degenerates for rho = 0, G = 0)
    H = parse_scalar(args.H) if args.H is not None else (G.abs2() + rho) * Q(1, 2) + I
    if fam.skt_constraint(rho, G, H):
        raise InputError("the base is not SKT: need rho + |G|^2 = 2 Re H")
    if args.point:
        points = [_point(args.point)]
    else:
        points = fam.seeded_points(args.seed, args.grid)
    results = fam.scan(rho, G, H, points, workers=args.workers)
    rows = []
    for r in results:
        rows.append({
            "point": [s(x) for x in r.point],
            "u": s(r.u) if r.u is not None else None,
            "residual": s(r.residual) if r.residual is not None else None,
            "skt": r.skt,
            "agrees": r.agrees,
            **({"skipped": r.skipped} if r.skipped else {}),
        })
    grad = fam.hypersurface_gradient_at_origin(rho, G, H)
    checked = [r for r in results if not r.skipped]
    doc = {
        "rho": rho,
        "G": s(G),
        "H": s(H),
        "points": rows,
        "summary": {
            "total": len(results),
            "checked": len(checked),
            "on_surface": sum(1 for r in checked if r.residual == 0),
            "agreement": sum(1 for r in checked if r.agrees),
        },
        "origin_gradient": [s(x) for x in grad],
        "origin_singular": not any(grad),
    }
    emit(doc, args.json)
    return 0 if all(r.agrees for r in checked) else 1


# ------------------------------------------------------------------ twist
def cmd_twist(args) -> int:
    if args.source == "flat":
        name, base = "flat", flat_base()
    else:
        name, base, _ = load_hermitian(args.source, args.metric)
    g = [parse_scalar(x) for x in args.gamma.split(",")]
    if len(g) != 4:
        raise InputError("--gamma needs four entries a,b,c,d")
    try:
        omegas = (parse_form(args.omega1, 6), parse_form(args.omega2, 6))
        t = TwistInput(base, omegas, [[g[0], g[1]], [g[2], g[3]]])
    except TwistError as exc:
        raise InputError(str(exc)) from None
    rep = check_twist_conditions(t)
    doc: dict = {
        "base": name,
        "conditions": {
            "quadratic": {"holds": rep.quadratic_holds, "value": form_str(rep.quadratic)},
            "c_wedge_omega1": {"holds": rep.c_wedge_holds[0], "value": form_str(rep.c_wedge[0])},
            "c_wedge_omega2": {"holds": rep.c_wedge_holds[1], "value": form_str(rep.c_wedge[1])},
        },
    }
    try:
        W = build_twist(t)
    except TwistError as exc:
        doc["twist"] = {"built": False, "reason": str(exc)}
    else:
        hs = W.structure
        ids = twist_torsion_identities(t, W)
        doc["twist"] = {
            "built": True,
            "dim": hs.dim,
            "algebra": W.algebra.salamon(),
            "skt": hs.check_condition("skt").holds,
            "astheno": hs.check_condition("astheno").holds,
            "identities": {
                "c_W": ids.c_W_holds,
                "dc_W": ids.dc_W_holds,
                "xi_c": ids.xi_c_holds,
                "xi_F": ids.xi_F_holds,
                "omega_wedge": ids.omega_identity_holds,
            },
            "c_W": form_str(ids.c_W),
            "dc_W": form_str(ids.dc_W),
        }
    emit(doc, args.json)
    return 0


# ------------------------------------------------------------------ catalog
def cmd_catalog(args) -> int:
    if args.action == "list":
        for n in catalog.names():
            e = catalog.get(n)
            print(f"{n:12s} {e.locus}")
        return 0
    targets = args.names or catalog.names()
    failed = False
    docs = []
    for n in targets:
        rep = catalog.verify(n)
        failed |= not rep.ok
        docs.append({
            "name": n,
            "ok": rep.ok,
            "checks": len(rep.checks),
            "mismatches": [{"key": c.key, "expected": _show(c.expected), "actual": _show(c.actual), "source": c.source} for c in rep.mismatches],
        })
    if args.json:
        emit({"entries": docs}, True)
    else:
        for d in docs:
            print(f"{d['name']:12s} {'ok' if d['ok'] else 'MISMATCH'} ({d['checks']} checks)")
            for m in d["mismatches"]:
                print(f"    {m['key']}: expected {m['expected']}, got {m['actual']} [{m['source']}]")
    return 1 if failed else 0


def _show(v):
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, Form):
        return form_str(v)
    return s(v)


# ------------------------------------------------------------------ entry point
def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="asthenolab", description="Exact Hermitian geometry on Lie algebras.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run Hermitian condition checks")
    p.add_argument("source", help="catalog:NAME, a file, or inline structure text")
    p.add_argument("--metric", help="diag(...), hdiag(...) or matrix [[...]]")
    p.add_argument("--conditions", help=f"comma list from {','.join(CONDITIONS)}; asserts they hold")
    p.add_argument("--connections", action="store_true", help="add Bismut and Chern data")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("derive", help="condition polynomials of a parameterized family")
    p.add_argument("source", help="family8, skt-frame, a file or inline text with params")
    p.add_argument("--condition", default="astheno")
    p.add_argument("--metric")
    p.add_argument("--weights", help="family8 metric weights, e.g. 2,3,4,5")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("deform", help="SKT hypersurface versus direct check on deformations")
    p.add_argument("--rho", type=int, choices=(0, 1), required=True)
    p.add_argument("--G", default="0")
    p.add_argument("--H", default=None)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--point", help="a,b,c,f")
    g.add_argument("--grid", type=int, default=10, help="number of seeded random points")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_deform)

    p = sub.add_parser("twist", help="twist a 6-dimensional base by two closed (1,1)-forms")
    p.add_argument("source", nargs="?", default="flat", help="flat, catalog:NAME, a file or inline text")
    p.add_argument("--omega1", required=True)
    p.add_argument("--omega2", required=True)
    p.add_argument("--gamma", default="1,0,0,1")
    p.add_argument("--metric")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_twist)

    p = sub.add_parser("catalog", help="list or verify the built-in examples")
    p.add_argument("action", choices=("list", "verify"))
    p.add_argument("names", nargs="*")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_catalog)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, DSLError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
