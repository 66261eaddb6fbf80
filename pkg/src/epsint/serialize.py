"""JSON (de)serialization with bit-exact rational strings.

Rationals travel as strings matching ``-?[0-9]+(/[1-9][0-9]*)?``; bare JSON
integers are accepted on input. Floats are refused so nothing is rounded.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .functions import PolyhedralConvexFunction
from .geometry import Polyhedron
from .integral import DiscreteMeasureSpace, IntegralInstance, IntegrandFamily, assemble
from .rational import format_rational, parse_rational

QUERY_KINDS = ("sum_rule", "conjugate", "epigraph", "normal_sets", "restricted", "br_run", "gateaux")


class SchemaError(ValueError):
    """Malformed instance document; ``path`` locates the offending field."""

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path


def _rat(v: Any, path: str) -> Fraction:
    if isinstance(v, bool):
        raise SchemaError("expected a rational, got a boolean", path)
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return parse_rational(v)
        except ValueError as exc:
            raise SchemaError(str(exc), path) from None
    raise SchemaError(f"expected a rational string, got {type(v).__name__}", path)


def _vec(v: Any, path: str, dim: int | None = None) -> tuple:
    if not isinstance(v, list):
        raise SchemaError("expected a list", path)
    if dim is not None and len(v) != dim:
        raise SchemaError(f"expected length {dim}, got {len(v)}", path)
    return tuple(_rat(c, f"{path}[{i}]") for i, c in enumerate(v))


def _obj(v: Any, path: str) -> dict:
    if not isinstance(v, dict):
        raise SchemaError("expected an object", path)
    return v


def _fmt(v) -> list:
    return [format_rational(Fraction(c)) for c in v]


# polyhedra ------------------------------------------------------------------

def polyhedron_to_json(P: Polyhedron, v_rep: bool = False) -> dict:
    if v_rep:
        return {"dimension": P.dim, "vertices": [_fmt(v) for v in P.vertices], "rays": [_fmt(r) for r in P.rays]}
    return {"A": [_fmt(a) for a, _ in P.h_rep], "b": [format_rational(Fraction(b)) for _, b in P.h_rep]}


def polyhedron_from_json(doc: Any, dim: int, path: str = "$") -> Polyhedron:
    doc = _obj(doc, path)
    if "vertices" in doc:
        verts = [_vec(v, f"{path}.vertices[{i}]", dim) for i, v in enumerate(doc["vertices"])]
        rays = [_vec(r, f"{path}.rays[{i}]", dim) for i, r in enumerate(doc.get("rays", []))]
        if not verts:
            return Polyhedron.empty(dim)
        return Polyhedron.from_v(verts, rays, dim=dim)
    A = doc.get("A", [])
    b = doc.get("b", [])
    if not isinstance(A, list) or not isinstance(b, list) or len(A) != len(b):
        raise SchemaError("H-rep needs lists A and b of equal length", path)
    rows = [_vec(a, f"{path}.A[{i}]", dim) for i, a in enumerate(A)]
    rhs = [_rat(c, f"{path}.b[{i}]") for i, c in enumerate(b)]
    return Polyhedron.from_h(rows, rhs, dim=dim)


# functions ------------------------------------------------------------------

def function_to_json(f: PolyhedralConvexFunction) -> dict:
    return {
        "pieces": [{"a": _fmt(a), "b": format_rational(b)} for a, b in f.pieces],
        "domain": polyhedron_to_json(f.domain),
    }


def function_from_json(doc: Any, dim: int, path: str = "$") -> PolyhedralConvexFunction:
    doc = _obj(doc, path)
    pieces = doc.get("pieces")
    if not isinstance(pieces, list) or not pieces:
        raise SchemaError("a function needs a nonempty list of pieces", path + ".pieces")
    ps = []
    for i, p in enumerate(pieces):
        p = _obj(p, f"{path}.pieces[{i}]")
        ps.append((_vec(p.get("a"), f"{path}.pieces[{i}].a", dim), _rat(p.get("b", "0"), f"{path}.pieces[{i}].b")))
    dom = polyhedron_from_json(doc["domain"], dim, path + ".domain") if "domain" in doc else None
    return PolyhedralConvexFunction(ps, dom, dim=dim)


# instances ------------------------------------------------------------------

def instance_to_json(inst: IntegralInstance, queries: list | None = None) -> dict:
    doc = {
        "dimension": inst.dim,
        "atoms": [
            {"id": str(a), "weight": format_rational(w), "function": function_to_json(f)}
            for a, w, f in inst.items()
        ],
    }
    if queries is not None:
        doc["queries"] = queries
    return doc


def instance_from_json(doc: Any) -> IntegralInstance:
    doc = _obj(doc, "$")
    d = doc.get("dimension")
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise SchemaError("dimension must be a positive integer", "$.dimension")
    atoms = doc.get("atoms")
    if not isinstance(atoms, list) or not atoms:
        raise SchemaError("need a nonempty atom list", "$.atoms")
    ids, weights, funcs = [], [], []
    for i, at in enumerate(atoms):
        p = f"$.atoms[{i}]"
        at = _obj(at, p)
        ids.append(str(at.get("id", i + 1)))
        w = _rat(at.get("weight", "1"), p + ".weight")
        if w <= 0:
            raise SchemaError("weights must be positive", p + ".weight")
        weights.append(w)
        funcs.append(function_from_json(at.get("function"), d, p + ".function"))
    if len(set(ids)) != len(ids):
        raise SchemaError("atom ids must be distinct", "$.atoms")
    return assemble(DiscreteMeasureSpace(tuple(ids), tuple(weights)), IntegrandFamily(tuple(funcs), d))


def validate_query(q: Any, dim: int, path: str) -> dict:
    """Normalize one query: rationals parsed, required fields present."""
    q = _obj(q, path)
    kind = q.get("kind")
    if kind not in QUERY_KINDS:
        raise SchemaError(f"unknown query kind {kind!r}", path + ".kind")
    out: dict = {"kind": kind}
    if kind in ("sum_rule", "normal_sets", "restricted", "br_run", "gateaux"):
        out["x"] = _vec(q.get("x"), path + ".x", dim)
    if kind in ("sum_rule", "normal_sets", "restricted"):
        eps = q.get("eps", ["0"])
        eps = eps if isinstance(eps, list) else [eps]
        out["eps"] = [_rat(e, f"{path}.eps[{i}]") for i, e in enumerate(eps)]
        if any(e < 0 for e in out["eps"]):
            raise SchemaError("eps must be nonnegative", path + ".eps")
    if kind == "conjugate":
        pts = q.get("points", [])
        if not isinstance(pts, list):
            raise SchemaError("expected a list of points", path + ".points")
        out["points"] = [_vec(p, f"{path}.points[{i}]", dim) for i, p in enumerate(pts)]
    if kind == "restricted":
        basis = q.get("L", [])
        if not isinstance(basis, list):
            raise SchemaError("expected a list of basis vectors", path + ".L")
        out["L"] = [_vec(v, f"{path}.L[{i}]", dim) for i, v in enumerate(basis)]
    if kind == "br_run":
        out["xstar"] = _vec(q.get("xstar"), path + ".xstar", dim)
        sched = q.get("schedule")
        if sched is not None:
            if not isinstance(sched, list) or any(not isinstance(s, list) or len(s) != 2 for s in sched):
                raise SchemaError("schedule must be a list of [eps, lambda] pairs", path + ".schedule")
            out["schedule"] = [(_rat(e, f"{path}.schedule[{i}][0]"), _rat(l, f"{path}.schedule[{i}][1]"))
                               for i, (e, l) in enumerate(sched)]
    return out


def load_document(text: str) -> tuple[IntegralInstance, list[dict]]:
    """Parse and validate an instance file; raises SchemaError or json.JSONDecodeError."""
    doc = json.loads(text)
    inst = instance_from_json(doc)
    queries = doc.get("queries", [])
    if not isinstance(queries, list):
        raise SchemaError("queries must be a list", "$.queries")
    return inst, [validate_query(q, inst.dim, f"$.queries[{i}]") for i, q in enumerate(queries)]


def dumps(doc: Any, indent: int | None = 2) -> str:
    return json.dumps(doc, indent=indent, sort_keys=False)
