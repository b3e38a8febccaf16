"""JSON encoding and decoding of every object the tool exchanges.

Rationals encode as plain integers or "p/q" strings; all bodies are emitted in
canonical form, so serialize(deserialize(x)) and deserialize(serialize(x)) are
identities on canonical data.  Every top-level document carries a "type" tag;
readers accept untagged documents by key shape.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .curves import INF, Curve, PointId, QDivisor
from .divisorial import DivisorialPolytope
from .errors import DivpolyError
from .fansy import MarkedFansyDivisor
from .geometry import EMPTY, Cone, Fan, Polyhedron, PolyhedralComplex, is_empty
from .pdiv import PolyhedralDivisor
from .support import SupportFunction


class ParseError(DivpolyError):
    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")


def rat_to_json(x):
    x = Fraction(x)
    if x.denominator == 1:
        return int(x)
    return f"{x.numerator}/{x.denominator}"


def rat_from_json(v, path="$"):
    if isinstance(v, bool):
        raise ParseError(path, "expected a rational, got a boolean")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(path, f"bad rational {v!r}: {exc}") from None
    raise ParseError(path, f"expected a rational, got {type(v).__name__}")


def vec_to_json(v):
    return [rat_to_json(x) for x in v]


def vec_from_json(v, path="$"):
    if not isinstance(v, list):
        raise ParseError(path, "expected a coordinate array")
    return tuple(rat_from_json(x, f"{path}[{i}]") for i, x in enumerate(v))


def poly_to_json(p):
    if is_empty(p):
        return {"empty": True}
    return {
        "vertices": [vec_to_json(v) for v in p.vertices],
        "rays": [list(r) for r in p.rays],
    }


def poly_from_json(obj, path="$"):
    if not isinstance(obj, dict):
        raise ParseError(path, "expected a polyhedron object")
    if obj.get("empty"):
        return EMPTY
    if "vertices" not in obj:
        raise ParseError(path, "polyhedron needs a 'vertices' list")
    verts = [vec_from_json(v, f"{path}.vertices[{i}]") for i, v in enumerate(obj["vertices"])]
    rays = [vec_from_json(r, f"{path}.rays[{i}]") for i, r in enumerate(obj.get("rays", []))]
    rays = [tuple(int(x) for x in r) for r in rays]
    return Polyhedron(verts, rays)


def cone_to_json(c: Cone):
    return {"rays": [list(r) for r in c.rays], "lineality": [list(l) for l in c.lineality]}


def cone_from_json(obj, path="$", rank=None):
    if not isinstance(obj, dict) or "rays" not in obj:
        raise ParseError(path, "expected a cone object with 'rays'")
    rays = [tuple(int(x) for x in vec_from_json(r, f"{path}.rays[{i}]")) for i, r in enumerate(obj["rays"])]
    lin = [tuple(int(x) for x in vec_from_json(l, f"{path}.lineality[{i}]")) for i, l in enumerate(obj.get("lineality", []))]
    if rank is None:
        if rays:
            rank = len(rays[0])
        elif lin:
            rank = len(lin[0])
        else:
            raise ParseError(path, "cannot infer the ambient rank of an empty cone")
    return Cone(rays, rank, lineality=lin)


def fan_to_json(f: Fan):
    return {"cones": [cone_to_json(c) for c in f.cones]}


def fan_from_json(obj, path="$", rank=None):
    if not isinstance(obj, dict) or "cones" not in obj:
        raise ParseError(path, "expected a fan object with 'cones'")
    cones = [cone_from_json(c, f"{path}.cones[{i}]", rank) for i, c in enumerate(obj["cones"])]
    if not cones and rank is None:
        raise ParseError(path, "cannot infer the ambient rank of an empty fan")
    return Fan(cones, rank if rank is not None else cones[0].ambient_rank)


def curve_to_json(c: Curve):
    pts = []
    for p in c.points:
        entry = {"label": p.label}
        if c.is_line():
            entry["coord"] = "inf" if p.is_infinity() else rat_to_json(p.coord)
        pts.append(entry)
    out = {"kind": c.kind, "points": pts}
    if c.kind == "abstract":
        out["genus"] = c.genus
    return out


def curve_from_json(obj, path="$"):
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ParseError(path, "expected a curve object with 'kind'")
    kind = obj["kind"]
    pts = []
    for i, entry in enumerate(obj.get("points", [])):
        label = entry.get("label")
        if label is None:
            raise ParseError(f"{path}.points[{i}]", "point needs a label")
        if kind == "P1":
            coord = entry.get("coord")
            if coord is None:
                raise ParseError(f"{path}.points[{i}]", "line point needs a coordinate")
            coord = INF if coord == "inf" else rat_from_json(coord, f"{path}.points[{i}].coord")
            pts.append(PointId(label, coord))
        else:
            pts.append(PointId(label))
    genus = obj.get("genus", 0)
    try:
        return Curve(kind, genus, pts)
    except ValueError as exc:
        raise ParseError(path, str(exc)) from None


def divisor_to_json(d: QDivisor):
    return {"coeffs": {p.label: rat_to_json(c) for p, c in d.coeffs}}


def pdiv_to_json(d: PolyhedralDivisor):
    return {
        "type": "polyhedral_divisor",
        "curve": curve_to_json(d.curve),
        "tail": cone_to_json(d.tail),
        "coeffs": [
            {"point": p.label, "poly": poly_to_json(poly)} for p, poly in d.coeffs
        ],
    }


def pdiv_from_json(obj, path="$"):
    curve = curve_from_json(obj.get("curve"), f"{path}.curve")
    tail = cone_from_json(obj.get("tail"), f"{path}.tail")
    coeffs = {}
    for i, entry in enumerate(obj.get("coeffs", [])):
        label = entry.get("point")
        try:
            p = curve.point(label)
        except KeyError as exc:
            raise ParseError(f"{path}.coeffs[{i}].point", str(exc)) from None
        coeffs[p] = poly_from_json(entry.get("poly"), f"{path}.coeffs[{i}].poly")
    try:
        return PolyhedralDivisor(curve, tail, coeffs)
    except DivpolyError as exc:
        raise ParseError(path, str(exc)) from None


def complex_to_json(cx: PolyhedralComplex):
    return {"cells": [poly_to_json(c) for c in cx.cells]}


def fansy_to_json(x: MarkedFansyDivisor):
    return {
        "type": "marked_fansy_divisor",
        "curve": curve_to_json(x.curve),
        "tailfan": fan_to_json(x.tailfan),
        "slices": [
            {"point": p.label, "cells": [poly_to_json(c) for c in cx.cells]}
            for p, cx in x.slices
        ],
        "marks": [cone_to_json(c) for c in x.marks],
    }


def fansy_from_json(obj, path="$"):
    curve = curve_from_json(obj.get("curve"), f"{path}.curve")
    tailfan = fan_from_json(obj.get("tailfan"), f"{path}.tailfan")
    rank = tailfan.ambient_rank
    slices = {}
    for i, entry in enumerate(obj.get("slices", [])):
        label = entry.get("point")
        try:
            p = curve.point(label)
        except KeyError as exc:
            raise ParseError(f"{path}.slices[{i}].point", str(exc)) from None
        cells = [
            poly_from_json(c, f"{path}.slices[{i}].cells[{j}]")
            for j, c in enumerate(entry.get("cells", []))
        ]
        slices[p] = PolyhedralComplex(cells, rank)
    marks = [cone_from_json(c, f"{path}.marks[{i}]", rank) for i, c in enumerate(obj.get("marks", []))]
    try:
        return MarkedFansyDivisor(curve, tailfan, slices, marks)
    except DivpolyError as exc:
        raise ParseError(path, str(exc)) from None


def support_to_json(h: SupportFunction):
    return {
        "type": "support_function",
        "base": fansy_to_json(h.base),
        "linear": [
            {"cone": cone_to_json(c), "gradient": list(g)} for c, g in h.linear
        ],
        "pieces": [
            {
                "point": p.label,
                "cells": [
                    {
                        "cell": poly_to_json(cell),
                        "gradient": list(g),
                        "constant": rat_to_json(a),
                    }
                    for cell, g, a in data
                ],
            }
            for p, data in h.pieces
        ],
    }


def support_from_json(obj, path="$"):
    base = fansy_from_json(obj.get("base"), f"{path}.base")
    linear = {}
    for i, entry in enumerate(obj.get("linear", [])):
        cone = cone_from_json(entry.get("cone"), f"{path}.linear[{i}].cone", base.ambient_rank)
        grad = vec_from_json(entry.get("gradient"), f"{path}.linear[{i}].gradient")
        linear[cone] = tuple(int(x) for x in grad)
    pieces = {}
    for i, entry in enumerate(obj.get("pieces", [])):
        label = entry.get("point")
        try:
            p = base.curve.point(label)
        except KeyError as exc:
            raise ParseError(f"{path}.pieces[{i}].point", str(exc)) from None
        celldata = {}
        for j, cd in enumerate(entry.get("cells", [])):
            cell = poly_from_json(cd.get("cell"), f"{path}.pieces[{i}].cells[{j}].cell")
            grad = vec_from_json(cd.get("gradient"), f"{path}.pieces[{i}].cells[{j}].gradient")
            const = rat_from_json(cd.get("constant", 0), f"{path}.pieces[{i}].cells[{j}].constant")
            celldata[cell] = (tuple(int(x) for x in grad), const)
        pieces[p] = celldata
    try:
        return SupportFunction(base, linear, pieces)
    except DivpolyError as exc:
        raise ParseError(path, str(exc)) from None


def divpoly_to_json(psi: DivisorialPolytope):
    return {
        "type": "divisorial_polytope",
        "curve": curve_to_json(psi.curve),
        "box": poly_to_json(psi.box),
        "pieces": [
            {
                "point": p.label,
                "affines": [
                    {"gradient": vec_to_json(g), "constant": rat_to_json(c)}
                    for g, c in affines
                ],
            }
            for p, affines in psi.pieces
        ],
    }


def divpoly_from_json(obj, path="$"):
    curve = curve_from_json(obj.get("curve"), f"{path}.curve")
    box = poly_from_json(obj.get("box"), f"{path}.box")
    pieces = {}
    for i, entry in enumerate(obj.get("pieces", [])):
        label = entry.get("point")
        try:
            p = curve.point(label)
        except KeyError as exc:
            raise ParseError(f"{path}.pieces[{i}].point", str(exc)) from None
        affines = []
        for j, aff in enumerate(entry.get("affines", [])):
            g = vec_from_json(aff.get("gradient"), f"{path}.pieces[{i}].affines[{j}].gradient")
            c = rat_from_json(aff.get("constant", 0), f"{path}.pieces[{i}].affines[{j}].constant")
            affines.append((g, c))
        pieces[p] = affines
    try:
        return DivisorialPolytope(curve, box, pieces)
    except DivpolyError as exc:
        raise ParseError(path, str(exc)) from None


def divisorial_fan_to_json(family):
    return {
        "type": "divisorial_fan",
        "divisors": [pdiv_to_json(d) for d in family],
    }


def divisorial_fan_from_json(obj, path="$"):
    return [
        pdiv_from_json(entry, f"{path}.divisors[{i}]")
        for i, entry in enumerate(obj.get("divisors", []))
    ]


# ---------------------------------------------------------------------------
# dispatch

_READERS = {
    "polyhedral_divisor": pdiv_from_json,
    "marked_fansy_divisor": fansy_from_json,
    "support_function": support_from_json,
    "divisorial_polytope": divpoly_from_json,
    "divisorial_fan": divisorial_fan_from_json,
}


def detect_type(obj) -> str:
    if not isinstance(obj, dict):
        raise ParseError("$", "expected a JSON object")
    t = obj.get("type")
    if t:
        if t not in _READERS:
            raise ParseError("$.type", f"unknown document type {t!r}")
        return t
    if "divisors" in obj:
        return "divisorial_fan"
    if "box" in obj and "pieces" in obj:
        return "divisorial_polytope"
    if "base" in obj and "linear" in obj:
        return "support_function"
    if "tailfan" in obj:
        return "marked_fansy_divisor"
    if "tail" in obj and "coeffs" in obj:
        return "polyhedral_divisor"
    raise ParseError("$", "cannot determine the document type from its keys")


def from_json(obj):
    """(type name, decoded object)."""
    t = detect_type(obj)
    return t, _READERS[t](obj)


def to_json(value):
    if isinstance(value, DivisorialPolytope):
        return divpoly_to_json(value)
    if isinstance(value, SupportFunction):
        return support_to_json(value)
    if isinstance(value, MarkedFansyDivisor):
        return fansy_to_json(value)
    if isinstance(value, PolyhedralDivisor):
        return pdiv_to_json(value)
    if isinstance(value, list):
        return divisorial_fan_to_json(value)
    raise TypeError(f"no JSON encoding for {type(value).__name__}")


def dumps(obj) -> str:
    """Canonical, deterministic document text."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
