"""Marked fansy divisors: complete slice data plus marks.

A marked fansy divisor packages, for finitely many points of a complete curve,
a complete polyhedral subdivision of N_Q with a common tail fan, together with
a set of marked cones recording which tail cones carry charts with complete
locus.  It expands to a divisorial fan (a finite intersection-closed family of
polyhedral divisors) and contracts back.
"""

from __future__ import annotations

from .curves import NO, UNKNOWN, YES, Verdict
from .errors import NotPointed, PreconditionError
from .geometry import (
    EMPTY,
    Cone,
    Fan,
    PolyhedralComplex,
    cone_as_polyhedron,
    cone_faces,
    cone_is_face,
    intersect,
    is_empty,
)
from .pdiv import PolyhedralDivisor, degree_poly, intersect_divisors, is_face_rel, is_proper, locus


class MarkedFansyDivisor:
    """Slices (default: the tail fan) plus marks on tail-fan cones."""

    __slots__ = ("curve", "tailfan", "slices", "marks")

    def __init__(self, curve, tailfan: Fan, slices, marks):
        if isinstance(slices, dict):
            slices = slices.items()
        default = _fan_as_complex(tailfan)
        stored = []
        for p, cx in slices:
            if cx.ambient_rank != tailfan.ambient_rank:
                raise PreconditionError("slice lives in the wrong ambient rank")
            if default is not None and cx == default:
                continue
            stored.append((p, cx))
        stored.sort(key=lambda pc: pc[0].label)
        labels = [p.label for p, _ in stored]
        if len(set(labels)) != len(labels):
            raise PreconditionError("duplicate slice points")
        marks = sorted(dict.fromkeys(marks), key=lambda c: (c.dim(), c.sort_key()))
        for m in marks:
            if m.ambient_rank != tailfan.ambient_rank:
                raise PreconditionError("mark lives in the wrong ambient rank")
        self.curve = curve
        self.tailfan = tailfan
        self.slices = tuple(stored)
        self.marks = tuple(marks)

    def __eq__(self, other):
        return (
            isinstance(other, MarkedFansyDivisor)
            and self.curve == other.curve
            and self.tailfan == other.tailfan
            and self.slices == other.slices
            and self.marks == other.marks
        )

    def __hash__(self):
        return hash((self.curve, self.tailfan, self.slices, self.marks))

    def __repr__(self):
        pts = [p.label for p, _ in self.slices]
        return f"MarkedFansyDivisor(points={pts}, marks={list(self.marks)})"

    @property
    def ambient_rank(self):
        return self.tailfan.ambient_rank

    def support(self):
        return [p for p, _ in self.slices]

    def slice_at(self, p) -> PolyhedralComplex:
        for q, cx in self.slices:
            if q == p:
                return cx
        default = _fan_as_complex(self.tailfan)
        if default is None:
            raise NotPointed("default slice of a non-pointed tail fan is not materializable")
        return default

    def is_marked(self, c: Cone) -> bool:
        return c in self.marks


def _fan_as_complex(fan: Fan):
    """The fan itself viewed as a polyhedral complex (None if non-pointed)."""
    if any(not c.is_pointed() for c in fan.cones):
        return None
    return PolyhedralComplex([cone_as_polyhedron(c) for c in fan.cones], fan.ambient_rank, check=False)


def dsigma(x: MarkedFansyDivisor, sigma: Cone) -> PolyhedralDivisor:
    """The polyhedral divisor with the unique sigma-tailed cell at every point."""
    if not sigma.is_full_dimensional():
        raise PreconditionError("dsigma needs a full-dimensional cone")
    if not sigma.is_pointed():
        raise NotPointed("dsigma needs a pointed cone")
    if sigma not in x.tailfan.cones:
        raise PreconditionError("cone is not a maximal cone of the tail fan")
    coeffs = {}
    for p, cx in x.slices:
        cells = cx.cells_with_tail(sigma)
        if len(cells) != 1:
            raise PreconditionError(
                f"slice at {p.label!r} has {len(cells)} cells with the given tail, expected 1"
            )
        coeffs[p] = cells[0]
    return PolyhedralDivisor(x.curve, sigma, coeffs)


def validate(x: MarkedFansyDivisor):
    """Check the four defining conditions; returns (verdict, report).

    The report maps condition names to (verdict, witnesses).  Properness of
    the marked charts may be UNKNOWN on positive-genus curves; everything else
    is exact.  Non-pointed marked cones (degenerate weight polytopes) skip the
    chart conditions.
    """
    report = {}
    fan_cones = x.tailfan.all_cones()

    # condition 1: complete slices with the right tail fan
    witnesses = []
    for p, cx in x.slices:
        if not cx.complete:
            witnesses.append((p.label, "slice is not a complete subdivision"))
        elif cx.tail_fan() != x.tailfan:
            witnesses.append((p.label, "tail fan of the slice differs from the tail fan"))
    for m in x.marks:
        if not any(m == c for c in fan_cones):
            witnesses.append((None, f"mark {m} is not a cone of the tail fan"))
    report["slices"] = (NO if witnesses else YES, witnesses)

    marked_full = [
        m for m in x.marks if m.is_full_dimensional() and m.is_pointed()
    ]

    # condition 2: properness of the marked full-dimensional charts
    verdict2 = YES
    witnesses = []
    if not report["slices"][1]:
        for sigma in marked_full:
            v = is_proper(dsigma(x, sigma))
            if v is not YES:
                witnesses.append((sigma, v))
            verdict2 = verdict2.both(v)
    report["properness"] = (verdict2, witnesses)

    # condition 3: marks on faces match nonempty degree intersections
    verdict3 = YES
    witnesses = []
    if not report["slices"][1]:
        for sigma in marked_full:
            deg = degree_poly(dsigma(x, sigma))
            for tau in cone_faces(sigma):
                if tau == sigma:
                    continue
                hit = not is_empty(intersect(deg, cone_as_polyhedron(tau)))
                if hit != x.is_marked(tau):
                    witnesses.append((sigma, tau, "marked" if x.is_marked(tau) else "unmarked", hit))
                    verdict3 = NO
    report["degree_marks"] = (verdict3, witnesses)

    # condition 4: marks are upward closed
    verdict4 = YES
    witnesses = []
    for tau in x.marks:
        for sigma in fan_cones:
            if sigma != tau and cone_is_face(tau, sigma) and not x.is_marked(sigma):
                witnesses.append((tau, sigma))
                verdict4 = NO
    report["upward_closure"] = (verdict4, witnesses)

    overall = YES
    for v, _ in report.values():
        overall = overall.both(v)
    return overall, report


def to_divisorial_fan(x: MarkedFansyDivisor):
    """Expand to a divisorial fan: marked charts plus affine charts for the
    unmarked maximal cells, closed under pairwise intersection.

    The expansion is combinatorial, so only the structural conditions gate it;
    properness of the charts is reported by validate and checked by callers
    that need it.
    """
    verdict, report = validate(x)
    structural = ("slices", "upward_closure")
    for name in structural:
        if report[name][0] is NO:
            raise PreconditionError(
                f"marked fansy divisor is structurally invalid ({name}): {report[name][1]}"
            )
    gens = []
    for sigma in x.marks:
        if sigma.is_full_dimensional() and sigma.is_pointed():
            gens.append(dsigma(x, sigma))
    support = x.support()
    for p, cx in x.slices:
        for cell in cx.cells:
            if x.is_marked(cell.tail()):
                continue
            coeffs = {q: EMPTY for q in support if q != p}
            coeffs[p] = cell
            gens.append(PolyhedralDivisor(x.curve, cell.tail(), coeffs))
    family = list(dict.fromkeys(gens))
    while True:
        new = []
        for i in range(len(family)):
            for j in range(i + 1, len(family)):
                inter = intersect_divisors(family[i], family[j])
                if inter not in family and inter not in new:
                    new.append(inter)
        if not new:
            break
        family.extend(new)
    return sorted(family, key=_divisor_sort_key)


def _divisor_sort_key(d: PolyhedralDivisor):
    return (
        d.tail.sort_key(),
        tuple(
            (p.label, (0, ()) if is_empty(poly) else (1, poly.sort_key()))
            for p, poly in d.coeffs
        ),
    )


def from_divisorial_fan(family, curve=None) -> MarkedFansyDivisor:
    """Contract a divisorial fan back to a marked fansy divisor.

    Verifies that pairwise intersections are present and are faces of both
    sides; raises with the witness pair otherwise.
    """
    family = list(family)
    if not family:
        raise PreconditionError("empty divisorial fan")
    if curve is None:
        curve = family[0].curve
    for d in family:
        if d.curve != curve:
            raise PreconditionError("divisors live on different curves")
    for i in range(len(family)):
        for j in range(i + 1, len(family)):
            a, b = family[i], family[j]
            inter = intersect_divisors(a, b)
            if inter not in family:
                raise PreconditionError(
                    f"intersection of members {i} and {j} is missing from the family"
                )
            for d in (a, b):
                rel = is_face_rel(inter, d)
                if rel is False:
                    raise PreconditionError(
                        f"intersection of members {i} and {j} is not a face of both"
                    )
    tailfan = Fan([d.tail for d in family])
    points = []
    for d in family:
        for p in d.support():
            if p not in points:
                points.append(p)
    slices = {}
    for p in points:
        cells = []
        for d in family:
            poly = d.coefficient(p)
            if not is_empty(poly):
                cells.append(poly)
        slices[p] = PolyhedralComplex(cells, tailfan.ambient_rank, check=False)
    marks = []
    for d in family:
        _, complete = locus(d)
        if complete and d.tail not in marks:
            marks.append(d.tail)
    return MarkedFansyDivisor(curve, tailfan, slices, marks)
