"""Polyhedral divisors on curves.

A polyhedral divisor assigns to finitely many points of the base curve a
polyhedron with a common pointed tail cone (the tail itself is the default
coefficient; the empty set is allowed and marks points removed from the
locus).  Evaluation at a dual-cone weight produces an ordinary rational
divisor on the curve.
"""

from __future__ import annotations

from fractions import Fraction

from .curves import (
    NO,
    UNKNOWN,
    YES,
    QDivisor,
    Verdict,
    floor_div,
    h0,
    has_principal_multiple,
)
from .errors import PreconditionError, RankMismatch, Unbounded
from .geometry import (
    EMPTY,
    Cone,
    Polyhedron,
    cone_as_polyhedron,
    cone_intersect,
    cone_is_face,
    dual_cone,
    intersect,
    is_empty,
    is_face,
    minkowski_sum,
    support_value,
)
from .linalg import dot


class PolyhedralDivisor:
    """Formal sum of polyhedral coefficients over points of a curve."""

    __slots__ = ("curve", "tail", "coeffs")

    def __init__(self, curve, tail: Cone, coeffs):
        if not tail.is_pointed():
            raise PreconditionError("the tail cone of a polyhedral divisor must be pointed")
        if isinstance(coeffs, dict):
            coeffs = coeffs.items()
        default = cone_as_polyhedron(tail)
        stored = []
        for p, poly in coeffs:
            if is_empty(poly):
                stored.append((p, EMPTY))
                continue
            if poly.ambient_rank != tail.ambient_rank:
                raise RankMismatch("coefficient lives in the wrong ambient rank")
            if poly.tail() != tail:
                raise PreconditionError(
                    f"coefficient at {p.label!r} has tail {poly.tail()}, expected {tail}"
                )
            if poly == default:
                continue
            stored.append((p, poly))
        stored.sort(key=lambda pc: pc[0].label)
        labels = [p.label for p, _ in stored]
        if len(set(labels)) != len(labels):
            raise PreconditionError("duplicate coefficient points")
        self.curve = curve
        self.tail = tail
        self.coeffs = tuple(stored)

    def __eq__(self, other):
        return (
            isinstance(other, PolyhedralDivisor)
            and self.curve == other.curve
            and self.tail == other.tail
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.curve, self.tail, self.coeffs))

    def __repr__(self):
        parts = [f"{poly}*[{p.label}]" for p, poly in self.coeffs]
        return f"PolyhedralDivisor(tail={self.tail}, " + (" + ".join(parts) or "trivial") + ")"

    @property
    def ambient_rank(self):
        return self.tail.ambient_rank

    def support(self):
        return [p for p, _ in self.coeffs]

    def coefficient(self, p):
        for q, poly in self.coeffs:
            if q == p:
                return poly
        return cone_as_polyhedron(self.tail)


def locus(d: PolyhedralDivisor):
    """(removed points, is_complete): the curve minus the empty-coefficient points."""
    removed = [p for p, poly in d.coeffs if is_empty(poly)]
    return removed, not removed


def evaluate(d: PolyhedralDivisor, u) -> QDivisor:
    """The rational divisor sum_P min <coefficient_P, u> * P on the locus."""
    u = tuple(int(x) for x in u)
    if any(dot(u, r) < 0 for r in d.tail.rays):
        raise Unbounded(f"weight {u} lies outside the dual of the tail cone")
    coeffs = []
    for p, poly in d.coeffs:
        if is_empty(poly):
            continue
        coeffs.append((p, support_value(poly, u)))
    return QDivisor(d.curve, coeffs)


def degree_poly(d: PolyhedralDivisor):
    """Minkowski sum of all coefficients; EMPTY once any coefficient is empty."""
    removed, complete = locus(d)
    if not complete:
        return EMPTY
    acc = None
    for _, poly in d.coeffs:
        acc = poly if acc is None else minkowski_sum(acc, poly)
    if acc is None:
        return cone_as_polyhedron(d.tail)
    return acc


def properness_report(d: PolyhedralDivisor):
    """(verdict, details) for the properness of d.

    On an affine locus the answer is YES.  On a complete locus the degree
    polyhedron must be a proper subset of the tail cone, and the evaluations
    at the boundary weights where the degree support function vanishes must
    have principal multiples.
    """
    removed, complete = locus(d)
    if not complete:
        return YES, {"locus": "affine", "removed": [p.label for p in removed]}
    deg = degree_poly(d)
    details = {"locus": "complete"}
    for v in deg.vertices:
        if not d.tail.contains(v):
            details["witness"] = tuple(v)
            details["reason"] = "degree polyhedron leaves the tail cone"
            return NO, details
    for r in deg.rays:
        if not d.tail.contains(r):
            details["witness"] = tuple(r)
            details["reason"] = "degree polyhedron leaves the tail cone"
            return NO, details
    origin = tuple(Fraction(0) for _ in range(d.ambient_rank))
    if deg.contains(origin):
        details["witness"] = origin
        details["reason"] = "degree polyhedron equals the whole tail cone"
        return NO, details
    verdict = YES
    boundary = []
    dual = dual_cone(d.tail)
    for u in list(dual.rays) + [l for l in dual.lineality] + [tuple(-x for x in l) for l in dual.lineality]:
        if support_value(deg, u) == 0:
            ev = evaluate(d, u)
            ok = has_principal_multiple(ev)
            boundary.append((tuple(u), ok))
            verdict = verdict.both(ok)
    details["boundary_weights"] = boundary
    return verdict, details


def is_proper(d: PolyhedralDivisor) -> Verdict:
    return properness_report(d)[0]


def intersect_divisors(a: PolyhedralDivisor, b: PolyhedralDivisor) -> PolyhedralDivisor:
    """Pointwise intersection; the tail is the intersection of the tails."""
    if a.curve != b.curve:
        raise PreconditionError("divisors live on different curves")
    if a.ambient_rank != b.ambient_rank:
        raise RankMismatch("divisors live in different ambient ranks")
    tail = cone_intersect(a.tail, b.tail)
    points = list(dict.fromkeys(a.support() + b.support()))
    coeffs = [(p, intersect(a.coefficient(p), b.coefficient(p))) for p in points]
    return PolyhedralDivisor(a.curve, tail, coeffs)


def is_face_rel(dp: PolyhedralDivisor, d: PolyhedralDivisor):
    """The combinatorial face criterion: coefficientwise faces plus
    deg(dp) = deg(d) intersected with the tail of dp.

    Returns True/False, or UNKNOWN when properness of d cannot be decided.
    """
    proper = is_proper(d)
    if proper is NO:
        raise PreconditionError("face relation is defined under a proper divisor")
    if proper is UNKNOWN:
        return UNKNOWN
    if not cone_is_face(dp.tail, d.tail):
        return False
    for p in dict.fromkeys(dp.support() + d.support()):
        if not is_face(dp.coefficient(p), d.coefficient(p)):
            return False
    lhs = degree_poly(dp)
    rhs = intersect(degree_poly(d), cone_as_polyhedron(dp.tail))
    if is_empty(lhs) or is_empty(rhs):
        return is_empty(lhs) and is_empty(rhs)
    return lhs == rhs


def weight_module_dim(d: PolyhedralDivisor, u):
    """Dimension of the graded piece at weight u: h0 of the floored evaluation."""
    return h0(floor_div(evaluate(d, u)))
