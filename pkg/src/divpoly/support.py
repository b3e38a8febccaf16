"""Support functions on marked fansy divisors.

A support function is a family of piecewise affine functions h_P on the slices,
all with the same linear part, stored as per-cell affine data (integral
gradient, rational constant).  The default piece of a point is the linear part
itself.  Cartier means the restrictions over marked cones are principal;
ample means strictly concave plus positive degree over unmarked cones.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from .curves import NO, UNKNOWN, YES, QDivisor, Verdict, h0, is_principal
from .errors import NotPointed, PreconditionError, RankMismatch
from .fansy import MarkedFansyDivisor
from .geometry import EMPTY, Cone, Polyhedron, intersect, is_empty, polyhedron_from_hrep
from .linalg import dot, vec_add, vec_neg


class SupportFunction:
    """Piecewise affine data over the slices of a marked fansy divisor."""

    __slots__ = ("base", "linear", "pieces")

    def __init__(self, base: MarkedFansyDivisor, linear, pieces):
        if isinstance(linear, dict):
            linear = linear.items()
        lin = {}
        for cone, grad in linear:
            grad = tuple(int(g) for g in grad)
            if len(grad) != base.ambient_rank:
                raise RankMismatch("gradient has wrong length")
            lin[cone] = grad
        for cone in base.tailfan.cones:
            if cone not in lin:
                raise PreconditionError("linear part misses a maximal tail-fan cone")
        for cone in lin:
            if cone not in base.tailfan.cones:
                raise PreconditionError("linear part names a cone outside the tail fan")

        if isinstance(pieces, dict):
            pieces = pieces.items()
        stored = []
        for p, celldata in pieces:
            if isinstance(celldata, dict):
                celldata = celldata.items()
            data = []
            for cell, (grad, const) in celldata:
                grad = tuple(int(g) for g in grad)
                if len(grad) != base.ambient_rank:
                    raise RankMismatch("gradient has wrong length")
                data.append((cell, grad, Fraction(const)))
            cells = sorted((c for c, _, _ in data), key=lambda c: c.sort_key())
            slice_cells = sorted(base.slice_at(p).cells, key=lambda c: c.sort_key())
            if cells != slice_cells:
                raise PreconditionError(
                    f"piece at {p.label!r} must carry affine data for exactly the slice cells"
                )
            data.sort(key=lambda t: t[0].sort_key())
            if not _piece_is_linear_part(base, lin, data):
                stored.append((p, tuple(data)))
        stored.sort(key=lambda pd: pd[0].label)
        self.base = base
        self.linear = tuple(sorted(lin.items(), key=lambda cg: cg[0].sort_key()))
        self.pieces = tuple(stored)

    def __eq__(self, other):
        return (
            isinstance(other, SupportFunction)
            and self.base == other.base
            and self.linear == other.linear
            and self.pieces == other.pieces
        )

    def __hash__(self):
        return hash((self.base, self.linear, self.pieces))

    def __repr__(self):
        return f"SupportFunction(points={[p.label for p, _ in self.pieces]}, linear={list(self.linear)})"

    # -- evaluation ---------------------------------------------------------
    def linear_gradient(self, cone: Cone):
        for c, g in self.linear:
            if c == cone:
                return g
        raise KeyError("cone is not a maximal cone of the tail fan")

    def linear_value(self, v):
        c = self.base.tailfan.cone_containing(v)
        if c is None:
            raise PreconditionError("tail fan is not complete at the given vector")
        return Fraction(dot(self.linear_gradient(c), v))

    def piece_data(self, p):
        """Per-cell affine data for the point, materializing the default."""
        for q, data in self.pieces:
            if q == p:
                return data
        cx = self.base.slice_at(p)
        out = []
        for cell in cx.cells:
            g = _linear_gradient_on_cell(self, cell)
            if g is None:
                raise PreconditionError(
                    "default piece undefined: a slice cell crosses tail-fan cones"
                )
            out.append((cell, g, Fraction(0)))
        return tuple(sorted(out, key=lambda t: t[0].sort_key()))

    def value(self, p, v):
        for cell, g, a in self.piece_data(p):
            if cell.contains(v):
                return Fraction(dot(g, v)) + a
        raise PreconditionError("vector outside the (complete) slice; data inconsistent")

    def support(self):
        return [p for p, _ in self.pieces]

    # -- validation ---------------------------------------------------------
    def validate(self):
        """Soft checks: linear-part consistency, continuity, integrality.

        Returns (verdict, list of problem strings).  Construction succeeds on
        structurally well-shaped data even when these fail, so deliberately
        broken inputs can still be examined (and rejected by is_cartier).
        """
        problems = []
        # the linear part must be continuous across the tail fan
        for i, (c1, g1) in enumerate(self.linear):
            for c2, g2 in self.linear[i + 1:]:
                from .geometry import cone_intersect

                shared = cone_intersect(c1, c2)
                for r in shared.generators():
                    if dot(g1, r) != dot(g2, r):
                        problems.append(
                            f"linear part is discontinuous across {shared}"
                        )
                        break
        for p, data in self.pieces:
            # tail-ray consistency: far-field behaviour must match the linear part
            for cell, g, a in data:
                for r in cell.rays:
                    if Fraction(dot(g, r)) != self.linear_value(r):
                        problems.append(
                            f"piece at {p.label!r} deviates from the linear part along ray {r}"
                        )
            # continuity across shared facets
            cells = [cd[0] for cd in data]
            for i in range(len(cells)):
                for j in range(i + 1, len(cells)):
                    shared = intersect(cells[i], cells[j])
                    if is_empty(shared):
                        continue
                    gi, ai = data[i][1], data[i][2]
                    gj, aj = data[j][1], data[j][2]
                    for v in shared.vertices:
                        if dot(gi, v) + ai != dot(gj, v) + aj:
                            problems.append(
                                f"piece at {p.label!r} is discontinuous across {shared}"
                            )
                            break
                    for r in shared.rays:
                        if dot(gi, r) != dot(gj, r):
                            problems.append(
                                f"piece at {p.label!r} has mismatched slopes across {shared}"
                            )
                            break
            # integrality on cell vertices
            for cell, g, a in data:
                for v in cell.vertices:
                    k = lcm(*(x.denominator for x in v)) if v else 1
                    val = Fraction(dot(g, v)) + a
                    if (k * val).denominator != 1:
                        problems.append(
                            f"piece at {p.label!r} violates integrality at vertex {tuple(v)}"
                        )
        return (YES if not problems else NO), problems


def _linear_gradient_on_cell(h: SupportFunction, cell: Polyhedron):
    """Gradient of the linear part on a cell contained in one tail-fan cone."""
    for cone, g in h.linear:
        if all(cone.contains(v) for v in cell.vertices) and all(
            cone.contains(r) for r in cell.rays
        ):
            return g
    return None


def _piece_is_linear_part(base, lin, data) -> bool:
    """Whether stored affine data coincides with the linear part (drop rule)."""
    for cell, g, a in data:
        if a != 0:
            return False
        match = None
        for cone, lg in lin.items():
            if all(cone.contains(v) for v in cell.vertices) and all(
                cone.contains(r) for r in cell.rays
            ):
                match = lg
                break
        if match is None or match != g:
            return False
    return True


def zero_support_function(base: MarkedFansyDivisor) -> SupportFunction:
    zero = tuple(0 for _ in range(base.ambient_rank))
    return SupportFunction(base, {c: zero for c in base.tailfan.cones}, {})


def restrict_zero(h: SupportFunction, sigma: Cone) -> QDivisor:
    """The divisor of affine constants over the sigma-tailed cells."""
    if not sigma.is_full_dimensional():
        raise PreconditionError("restriction needs a full-dimensional cone")
    if sigma.is_pointed() and sigma not in h.base.tailfan.cones:
        raise PreconditionError("cone is not a maximal cone of the tail fan")
    coeffs = []
    for p, data in h.pieces:
        found = [a for cell, g, a in data if cell.tail() == sigma]
        if len(found) != 1:
            raise PreconditionError(
                f"slice at {p.label!r} has {len(found)} cells tailed by the cone, expected 1"
            )
        coeffs.append((p, found[0]))
    return QDivisor(h.base.curve, coeffs)


def is_cartier(h: SupportFunction) -> Verdict:
    """Principality of the restrictions over all marked full-dimensional cones."""
    verdict = YES
    for sigma in h.base.marks:
        if not sigma.is_full_dimensional():
            continue
        if not sigma.is_pointed():
            # degenerate whole-space mark: only the zero constant part exists
            if h.pieces:
                return NO
            continue
        verdict = verdict.both(is_principal(restrict_zero(h, sigma)))
    return verdict


def _strictly_concave_across(data) -> bool:
    """Strict concavity of one piece across every interior facet of its cells."""
    n = len(data)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            ci, gi, ai = data[i]
            cj, gj, aj = data[j]
            shared = intersect(ci, cj)
            if is_empty(shared):
                continue
            if shared.dim() != ci.ambient_rank - 1:
                continue
            # witness point inside cj but off the shared facet
            gens = list(cj.vertices) + [vec_add(cj.vertices[0], r) for r in cj.rays]
            k = len(gens)
            witness = tuple(sum(g[t] for g in gens) / Fraction(k) for t in range(cj.ambient_rank))
            lhs = Fraction(dot(gi, witness)) + ai
            rhs = Fraction(dot(gj, witness)) + aj
            if not lhs > rhs:
                return False
    return True


def is_ample(h: SupportFunction) -> Verdict:
    """Strict concavity on every slice plus positivity over unmarked cones."""
    cart = is_cartier(h)
    if cart is NO:
        raise PreconditionError("support function is not Cartier")
    if cart is UNKNOWN:
        return UNKNOWN
    ok, problems = h.validate()
    if ok is NO:
        raise PreconditionError(f"support function data is inconsistent: {problems}")
    checked_default = False
    piece_points = {p for p, _ in h.pieces}
    for p, _ in h.base.slices:
        if p not in piece_points:
            # a stored (finer) slice carrying the bare linear part can never
            # be strictly concave with respect to its own subdivision
            data = h.piece_data(p)
            if len(data) > len(h.base.tailfan.cones):
                return NO
    for p, data in h.pieces:
        if not _strictly_concave_across(data):
            return NO
    # the linear part itself, on the tail fan (covers all default points)
    if all(c.is_pointed() for c in h.base.tailfan.cones):
        from .geometry import cone_as_polyhedron

        default = tuple(
            (cone_as_polyhedron(c), h.linear_gradient(c), Fraction(0))
            for c in h.base.tailfan.cones
        )
        if len(default) > 1 and not _strictly_concave_across(default):
            return NO
        checked_default = True
    for sigma in h.base.tailfan.cones:
        if sigma.is_full_dimensional() and sigma.is_pointed() and not h.base.is_marked(sigma):
            from .curves import degree

            if not -degree(restrict_zero(h, sigma)) > 0:
                return NO
    return YES


def weight_polytope(h: SupportFunction):
    """{u : <v,u> >= linear part at v for all v}, a bounded polytope (or EMPTY)."""
    ineqs = []
    for cone, g in h.linear:
        for r in cone.rays:
            ineqs.append((r, Fraction(dot(r, g))))
        for l in cone.lineality:
            ineqs.append((l, Fraction(dot(l, g))))
            ineqs.append((vec_neg(l), -Fraction(dot(l, g))))
    box = polyhedron_from_hrep(ineqs, h.base.ambient_rank)
    if not is_empty(box) and box.rays:
        raise PreconditionError("weight polytope came out unbounded; tail fan incomplete?")
    return box


def sections_dim(h: SupportFunction, u):
    """Dimension of the graded piece of sections at lattice weight u."""
    u = tuple(int(x) for x in u)
    box = weight_polytope(h)
    if is_empty(box) or not box.contains(u):
        return 0
    return h0(dual_at(h, u))


def dual_at(h: SupportFunction, u) -> QDivisor:
    """The divisor h*(u): per point, min over slice vertices of <v,u> - h_P(v)."""
    coeffs = []
    for p, data in h.pieces:
        vals = []
        for cell, g, a in data:
            for v in cell.vertices:
                vals.append(Fraction(dot(v, u)) - (Fraction(dot(g, v)) + a))
        coeffs.append((p, min(vals)))
    return QDivisor(h.base.curve, coeffs)


def add(g: SupportFunction, h: SupportFunction) -> SupportFunction:
    """Cellwise sum; both summands must live on the same base."""
    if g.base != h.base:
        raise PreconditionError("support functions live on different bases")
    linear = {c: vec_add(g.linear_gradient(c), h.linear_gradient(c)) for c in g.base.tailfan.cones}
    points = dict.fromkeys(g.support() + h.support())
    pieces = {}
    for p in points:
        dg = {cell: (grad, const) for cell, grad, const in g.piece_data(p)}
        dh = {cell: (grad, const) for cell, grad, const in h.piece_data(p)}
        pieces[p] = {
            cell: (vec_add(dg[cell][0], dh[cell][0]), dg[cell][1] + dh[cell][1])
            for cell in dg
        }
    return SupportFunction(g.base, linear, pieces)


def scale(k, h: SupportFunction) -> SupportFunction:
    k = int(k)
    if k <= 0:
        raise PreconditionError("scaling factor must be a positive integer")
    linear = {c: tuple(k * x for x in h.linear_gradient(c)) for c in h.base.tailfan.cones}
    pieces = {
        p: {cell: (tuple(k * x for x in grad), k * const) for cell, grad, const in data}
        for p, data in h.pieces
    }
    return SupportFunction(h.base, linear, pieces)


def dualize_h(h: SupportFunction):
    """The divisorial polytope dual to an ample support function."""
    from .divisorial import DivisorialPolytope

    amp = is_ample(h)
    if amp is NO:
        raise PreconditionError("dualization needs an ample support function")
    if amp is UNKNOWN:
        raise PreconditionError("ampleness could not be certified on this base curve")
    box = weight_polytope(h)
    if is_empty(box):
        raise PreconditionError("ample support function with empty weight polytope")
    pieces = {}
    for p, data in h.pieces:
        affines = []
        for cell, g, a in data:
            for v in cell.vertices:
                affines.append((v, -(Fraction(dot(g, v)) + a)))
        pieces[p] = affines
    return DivisorialPolytope(h.base.curve, box, pieces)
