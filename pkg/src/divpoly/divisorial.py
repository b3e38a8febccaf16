"""Divisorial polytopes: concave piecewise affine maps from a lattice polytope
to rational divisors on a curve.

Each piece is stored as a finite set of affine functions whose pointwise
minimum is the piece; concavity is structural, conjugation is direct, and JSON
round-trips exactly.  The default piece is 0.
"""

from __future__ import annotations

from fractions import Fraction
from math import floor, lcm

from .curves import (
    INF,
    NO,
    UNKNOWN,
    YES,
    Curve,
    PointId,
    QDivisor,
    degree as divisor_degree,
    floor_div,
    has_principal_multiple,
    projective_line,
)
from .errors import PreconditionError, RankMismatch, UnsupportedRank
from .counting import UniPoly, ehrhart, euclidean_volume, is_smooth_at_vertex
from .fansy import MarkedFansyDivisor
from .geometry import (
    EMPTY,
    Fan,
    Polyhedron,
    PolyhedralComplex,
    face_of,
    is_empty,
    minkowski_sum,
    normal_fan,
    polyhedron_from_hrep,
)
from .linalg import dot, frac_vec, vec_sub
from .support import SupportFunction

GENERIC_LABEL = "_generic"
GENERIC = PointId(GENERIC_LABEL)


class DivisorialPolytope:
    """Lattice polytope plus concave integral piecewise affine coefficients."""

    __slots__ = ("curve", "box", "pieces")

    def __init__(self, curve: Curve, box: Polyhedron, pieces):
        if is_empty(box) or box.rays:
            raise PreconditionError("the box must be a nonempty bounded polytope")
        if not all(all(x.denominator == 1 for x in v) for v in box.vertices):
            raise PreconditionError("the box must have lattice vertices")
        if isinstance(pieces, dict):
            pieces = pieces.items()
        stored = []
        for p, affines in pieces:
            canon = _canonical_affines(affines, box)
            if canon is not None:
                stored.append((p, canon))
        stored.sort(key=lambda pa: pa[0].label)
        labels = [p.label for p, _ in stored]
        if len(set(labels)) != len(labels):
            raise PreconditionError("duplicate piece points")
        self.curve = curve
        self.box = box
        self.pieces = tuple(stored)

    def __eq__(self, other):
        return (
            isinstance(other, DivisorialPolytope)
            and self.curve == other.curve
            and self.box == other.box
            and self.pieces == other.pieces
        )

    def __hash__(self):
        return hash((self.curve, self.box, self.pieces))

    def __repr__(self):
        return f"DivisorialPolytope(box={self.box}, points={[p.label for p, _ in self.pieces]})"

    @property
    def rank(self):
        return self.box.ambient_rank

    def support(self):
        return [p for p, _ in self.pieces]

    def piece_affines(self, p):
        for q, affines in self.pieces:
            if q == p:
                return affines
        return ((tuple(0 for _ in range(self.rank)), Fraction(0)),)

    def value(self, p, u) -> Fraction:
        return min(Fraction(dot(g, u)) + c for g, c in self.piece_affines(p))

    def divisor_at(self, u) -> QDivisor:
        return QDivisor(self.curve, [(p, self.value(p, u)) for p, _ in self.pieces])

    def degree_at(self, u) -> Fraction:
        return sum((self.value(p, u) for p, _ in self.pieces), Fraction(0))

    def piece_min(self, p) -> Fraction:
        return min(self.value(p, v) for v in _subdivision_vertices(self, p))


def _canonical_affines(affines, box):
    """Prune to the affines active on full-dimensional regions; None if the
    piece is identically zero."""
    affines = [(frac_vec(g), Fraction(c)) for g, c in affines]
    affines = list(dict.fromkeys(affines))
    if not affines:
        raise PreconditionError("a piece needs at least one affine function")
    d = box.dim()
    if d == 0:
        u = box.vertices[0]
        val = min(Fraction(dot(g, u)) + c for g, c in affines)
        if val == 0:
            return None
        return ((tuple(Fraction(0) for _ in range(box.ambient_rank)), val),)
    kept = []
    for i, (g, c) in enumerate(affines):
        region = _active_region(affines, i, box)
        if not is_empty(region) and region.dim() == d:
            kept.append((g, c))
    kept.sort()
    zero = tuple(Fraction(0) for _ in range(box.ambient_rank))
    if kept == [(zero, Fraction(0))]:
        return None
    return tuple(kept)


def _active_region(affines, i, box):
    """Closure of {u in box : affine i is the minimum}."""
    gi, ci = affines[i]
    rows = []
    ineqs, eqs = box.hrep()
    rows.extend(ineqs)
    for n, b in eqs:
        rows.append((n, b))
        rows.append((tuple(-x for x in n), -b))
    for j, (gj, cj) in enumerate(affines):
        if j == i:
            continue
        rows.append((vec_sub(gj, gi), ci - cj))
    return polyhedron_from_hrep(rows, box.ambient_rank)


def piece_regions(psi: DivisorialPolytope, p):
    """Full-dimensional linearity regions of the piece at p, with their data."""
    affines = psi.piece_affines(p)
    out = []
    for i, (g, c) in enumerate(affines):
        region = _active_region(list(affines), i, psi.box)
        if not is_empty(region) and region.dim() == psi.box.dim():
            out.append((region, (g, c)))
    return out


def _subdivision_vertices(psi, p):
    verts = set(psi.box.vertices)
    for region, _ in piece_regions(psi, p):
        verts.update(region.vertices)
    return sorted(verts)


def graph_vertices(psi: DivisorialPolytope, p):
    """Vertices (u, value) of the graph of the piece at p."""
    return [(u, psi.value(p, u)) for u in _subdivision_vertices(psi, p)]


def refinement_cells(psi: DivisorialPolytope):
    """Cells of the common refinement of all piece subdivisions."""
    cells = [psi.box]
    for p, _ in psi.pieces:
        new = []
        for region, _ in piece_regions(psi, p):
            for cell in cells:
                from .geometry import intersect

                piece = intersect(cell, region)
                if not is_empty(piece) and piece.dim() == psi.box.dim():
                    new.append(piece)
        cells = list(dict.fromkeys(new)) if new else cells
    return cells


def refinement_vertices(psi: DivisorialPolytope):
    verts = set(psi.box.vertices)
    for cell in refinement_cells(psi):
        verts.update(cell.vertices)
    return sorted(verts)


def _strictly_interior(psi, u) -> bool:
    ineqs, eqs = psi.box.hrep()
    return all(dot(n, u) > b for n, b in ineqs) and all(dot(n, u) == b for n, b in eqs)


def validate(psi: DivisorialPolytope):
    """(verdict, report): positivity of the degree inside the box, the vertex
    condition, and integrality of the piece graphs."""
    report = {}

    # (i) positive degree on the interior
    witnesses = []
    verdict1 = YES
    cells = refinement_cells(psi)
    vertex_values = {}
    for cell in cells:
        for v in cell.vertices:
            vertex_values.setdefault(v, psi.degree_at(v))
    for v in psi.box.vertices:
        vertex_values.setdefault(tuple(v), psi.degree_at(v))
    for v, val in vertex_values.items():
        if _strictly_interior(psi, v) and val <= 0:
            witnesses.append((tuple(v), val))
            verdict1 = NO
        if val < 0 and not _strictly_interior(psi, v) and tuple(v) not in {tuple(w) for w in psi.box.vertices}:
            witnesses.append((tuple(v), val))
            verdict1 = NO
    if verdict1 is YES and psi.box.dim() > 0:
        for cell in cells:
            if all(vertex_values[v] == 0 for v in cell.vertices):
                witnesses.append(("degree vanishes on a full-dimensional cell", cell.vertices[0]))
                verdict1 = NO
                break
    if verdict1 is YES:
        zeros = [v for v, val in vertex_values.items() if val == 0 and not _strictly_interior(psi, v)]
        for i in range(len(zeros)):
            for j in range(i + 1, len(zeros)):
                mid = tuple((a + b) / 2 for a, b in zip(zeros[i], zeros[j]))
                if psi.box.contains(mid) and _strictly_interior(psi, mid) and psi.degree_at(mid) == 0:
                    witnesses.append((mid, Fraction(0)))
                    verdict1 = NO
    report["interior_degree"] = (verdict1, witnesses)

    # (ii) box vertices: positive degree or a principal multiple
    verdict2 = YES
    witnesses = []
    for v in psi.box.vertices:
        d = psi.degree_at(v)
        if d > 0:
            continue
        if d < 0:
            witnesses.append((tuple(v), "negative degree"))
            verdict2 = NO
            continue
        ok = has_principal_multiple(psi.divisor_at(v))
        if ok is not YES:
            witnesses.append((tuple(v), ok))
        verdict2 = verdict2.both(ok)
    report["vertex_condition"] = (verdict2, witnesses)

    # (iii) integral graph vertices
    verdict3 = YES
    witnesses = []
    for p, _ in psi.pieces:
        for u, val in graph_vertices(psi, p):
            if any(x.denominator != 1 for x in u) or val.denominator != 1:
                witnesses.append((p.label, tuple(u), val))
                verdict3 = NO
    report["graph_integrality"] = (verdict3, witnesses)

    overall = YES
    for v, _ in report.values():
        overall = overall.both(v)
    return overall, report


# ---------------------------------------------------------------------------
# semigroup structure

_DOWN = None


def _hypograph(psi: DivisorialPolytope, p) -> Polyhedron:
    """Region under the graph of the piece at p, over the box."""
    pts = [u + (val,) for u, val in graph_vertices(psi, p)]
    down = tuple([0] * psi.rank) + (-1,)
    return Polyhedron(pts, [down], psi.rank + 1)


def _upper_function_from_hypograph(hyp: Polyhedron):
    """Affine pieces (gradient, constant) bounding the hypograph from above."""
    affines = []
    ineqs, _eqs = hyp.hrep()
    for n, b in ineqs:
        c = n[-1]
        if c < 0:
            g = tuple(Fraction(x) / (-c) for x in n[:-1])
            affines.append((g, Fraction(b) / c))
    return affines


def add(a: DivisorialPolytope, b: DivisorialPolytope) -> DivisorialPolytope:
    """Semigroup sum: the box adds, the pieces sup-convolve (hypograph sums)."""
    if a.curve != b.curve:
        raise PreconditionError("summands live on different curves")
    if a.rank != b.rank:
        raise RankMismatch("summands live in different ambient ranks")
    box = minkowski_sum(a.box, b.box)
    pieces = {}
    for p in dict.fromkeys(a.support() + b.support()):
        hyp = minkowski_sum(_hypograph(a, p), _hypograph(b, p))
        pieces[p] = _upper_function_from_hypograph(hyp)
    return DivisorialPolytope(a.curve, box, pieces)


def scale(k, a: DivisorialPolytope) -> DivisorialPolytope:
    """The k-fold semigroup sum: box dilated, affine constants scaled."""
    k = int(k)
    if k <= 0:
        raise PreconditionError("scaling factor must be a positive integer")
    box = a.box.scale(k)
    pieces = {p: [(g, k * c) for g, c in affines] for p, affines in a.pieces}
    return DivisorialPolytope(a.curve, box, pieces)


# ---------------------------------------------------------------------------
# dualization

def dualize_psi(psi: DivisorialPolytope):
    """The marked fansy divisor and ample support function dual to psi."""
    verdict, report = validate(psi)
    if verdict is not YES:
        raise PreconditionError(f"divisorial polytope is not valid: {report}")
    fan = normal_fan(psi.box)
    rank = psi.rank

    slices = {}
    piece_data = {}
    for p, _ in psi.pieces:
        gverts = graph_vertices(psi, p)
        affines = []
        for u, t in gverts:
            if any(x.denominator != 1 for x in u):
                raise PreconditionError("graph vertices must be integral")
            affines.append((tuple(int(x) for x in u), t))
        affines = list(dict.fromkeys(affines))
        cells = {}
        for i, (u, t) in enumerate(affines):
            rows = []
            for j, (u2, t2) in enumerate(affines):
                if i == j:
                    continue
                rows.append((vec_sub(u2, u), t2 - t))
            cell = polyhedron_from_hrep(rows, rank)
            if not is_empty(cell) and cell.dim() == rank:
                cells[cell] = (u, -t)
        slices[p] = PolyhedralComplex(list(cells.keys()), rank, check=False)
        piece_data[p] = cells

    linear = {}
    for cone in fan.cones:
        u = _minimizing_vertex(psi.box, cone)
        linear[cone] = tuple(int(x) for x in u)

    marks = []
    for cone in fan.all_cones():
        face = _face_for_normal_cone(psi.box, cone)
        if _degree_zero_on_face(psi, face):
            marks.append(cone)

    base = MarkedFansyDivisor(psi.curve, fan, slices, marks)
    h = SupportFunction(base, linear, piece_data)
    return base, h


def _minimizing_vertex(box: Polyhedron, cone):
    """The vertex of the box minimizing every functional of a maximal cone."""
    u = tuple(sum(r[i] for r in cone.rays) for i in range(box.ambient_rank)) if cone.rays else tuple(
        0 for _ in range(box.ambient_rank)
    )
    f = face_of(box, u)
    return f.vertices[0]


def _face_for_normal_cone(box: Polyhedron, cone):
    u = tuple(sum(r[i] for r in cone.rays) for i in range(box.ambient_rank)) if cone.rays else tuple(
        0 for _ in range(box.ambient_rank)
    )
    return face_of(box, u)


def _degree_zero_on_face(psi: DivisorialPolytope, face: Polyhedron) -> bool:
    """Whether the (concave, nonnegative) degree vanishes identically on a face."""
    from .geometry import intersect

    if any(psi.degree_at(v) != 0 for v in face.vertices):
        return False
    for cell in refinement_cells(psi):
        piece = intersect(cell, face)
        if is_empty(piece):
            continue
        if any(psi.degree_at(v) != 0 for v in piece.vertices):
            return False
    return True


# ---------------------------------------------------------------------------
# derived polytopes and invariants

def delta_polytope(psi: DivisorialPolytope, points) -> Polyhedron:
    """Hull of the graph of sum_{P in I} psi_P over the negated complementary sum."""
    labels = {p.label for p in points}
    inside = [p for p, _ in psi.pieces if p.label in labels]
    outside = [p for p, _ in psi.pieces if p.label not in labels]
    verts = set()
    base_pts = refinement_vertices(psi)
    for u in base_pts:
        upper = sum((psi.value(p, u) for p in inside), Fraction(0))
        lower = -sum((psi.value(p, u) for p in outside), Fraction(0))
        verts.add(tuple(u) + (upper,))
        verts.add(tuple(u) + (lower,))
    return Polyhedron(sorted(verts), (), psi.rank + 1)


def tilde_delta(psi: DivisorialPolytope, p) -> Polyhedron:
    """Hull of the graph of the piece at p over the box at the piece minimum."""
    gverts = graph_vertices(psi, p)
    m = min(val for _, val in gverts)
    pts = [u + (val,) for u, val in gverts]
    pts += [tuple(v) + (m,) for v in psi.box.vertices]
    return Polyhedron(pts, (), psi.rank + 1)


def degree_number(psi: DivisorialPolytope) -> Fraction:
    """(rank+1)! times the volume of the derived polytope, checked across
    representative point sets."""
    m = psi.rank
    fact = 1
    for i in range(2, m + 2):
        fact *= i
    all_points = psi.support()
    vol = euclidean_volume(delta_polytope(psi, all_points))
    for subset in [[]] + [[p] for p in all_points]:
        v = euclidean_volume(delta_polytope(psi, subset))
        if v != vol:
            raise PreconditionError(
                f"volume of the derived polytope depends on the point set: {v} != {vol}"
            )
    return fact * vol


def smooth_at(psi: DivisorialPolytope, p, v):
    """Smoothness of psi at (p, v); v must project from a graph vertex at p."""
    v = tuple(Fraction(x) for x in v)
    if p.label == GENERIC_LABEL or p.label not in {q.label for q in psi.support()}:
        sub_verts = [tuple(w) for w in psi.box.vertices]
        p = GENERIC
    else:
        sub_verts = [tuple(u) for u in _subdivision_vertices(psi, p)]
    if v not in sub_verts:
        raise PreconditionError(f"({p.label}, {v}) is not a graph vertex")
    d = psi.degree_at(v)
    if d > 0:
        delta = delta_polytope(psi, [p] if p is not GENERIC else [])
        val = psi.value(p, v) if p is not GENERIC else Fraction(0)
        return is_smooth_at_vertex(delta, v + (val,))
    # contracting chart: the curve must be the line and all but two points
    # must be locally trivial with integral slope
    if not psi.curve.is_line():
        return False
    failing = []
    for q, _ in psi.pieces:
        if not _piece_locally_trivial(psi, q, v):
            failing.append(q)
    if len(failing) > 2:
        return False
    candidates = list(psi.support()) + [GENERIC]
    for p1 in candidates:
        rest = [q for q in failing if q != p1]
        if len(rest) > 1:
            continue
        delta = delta_polytope(psi, [p1] if p1 is not GENERIC else [])
        val = psi.value(p1, v) if p1 is not GENERIC else Fraction(0)
        try:
            if is_smooth_at_vertex(delta, v + (val,)):
                return True
        except PreconditionError:
            continue
    return False


def _piece_locally_trivial(psi, q, v) -> bool:
    """(v, value) lies in exactly one full-dimensional graph cell whose slope
    is integral."""
    regions = piece_regions(psi, q)
    containing = [(region, aff) for region, aff in regions if region.contains(v)]
    if len(containing) != 1:
        return False
    (_, (g, _c)) = containing[0]
    return all(x.denominator == 1 for x in g)


def is_smooth(psi: DivisorialPolytope):
    """(smooth?, witnesses); witnesses collapse to the generic label when every
    representative point fails at the same spot."""
    checked = {}
    for p, _ in psi.pieces:
        for u, _val in graph_vertices(psi, p):
            checked.setdefault(tuple(u), []).append(p)
    for v in psi.box.vertices:
        checked.setdefault(tuple(v), []).append(GENERIC)
    failures = {}
    for v, pts in sorted(checked.items()):
        for p in pts:
            if not smooth_at(psi, p, v):
                failures.setdefault(v, []).append(p)
    witnesses = []
    for v, pts in sorted(failures.items()):
        if len(pts) == len(checked[v]) and len(pts) > 1:
            witnesses.append(("P", v))
        else:
            witnesses.extend((p.label, v) for p in pts)
    return (not witnesses), witnesses


def ehrhart_psi(psi: DivisorialPolytope) -> UniPoly:
    """The mixed Ehrhart polynomial of the divisorial polytope."""
    e_box = ehrhart(psi.box)
    total = e_box
    k_poly = UniPoly([0, 1])
    for p, _ in psi.pieces:
        e_tilde = ehrhart(tilde_delta(psi, p))
        m = psi.piece_min(p)
        correction = e_box - (e_box * k_poly).scale(m)
        total = total + e_tilde - correction
    return total


def hilbert_polynomial(psi: DivisorialPolytope):
    """Hilbert polynomial: exact on genus 0 (and in the ample floor-degree
    regime); otherwise the (upper, lower) polynomial bounds."""
    from .counting import lattice_points

    e = ehrhart_psi(psi)
    g = psi.curve.genus
    if g == 0:
        return e
    e_box = ehrhart(psi.box)
    lower = e - e_box.scale(g)
    hypothesis = True
    for u in lattice_points(psi.box):
        if divisor_degree(floor_div(psi.divisor_at(u))) < 2 * g - 1:
            hypothesis = False
            break
    if hypothesis:
        return lower
    return (e, lower)


# ---------------------------------------------------------------------------
# toric downgrade

def toric_downgrade(delta: Polyhedron, f, g_rows, s_cols) -> DivisorialPolytope:
    """Divisorial polytope of a polytope under a corank-one torus restriction.

    f spans the distinguished one-parameter subgroup, g_rows give the quotient
    map, s_cols a section of it.  The two pieces at 0 and infinity are the
    fiberwise upper and (negated) lower extents of delta.
    """
    if is_empty(delta) or delta.rays:
        raise PreconditionError("downgrade needs a bounded lattice polytope")
    f = tuple(int(x) for x in f)
    g_rows = [tuple(int(x) for x in row) for row in g_rows]
    s_cols = [tuple(int(x) for x in col) for col in s_cols]
    m = len(g_rows)
    if len(s_cols) != m:
        raise PreconditionError("section and projection have mismatched ranks")
    for row in g_rows:
        if dot(row, f) != 0:
            raise PreconditionError("the projection does not kill the subgroup direction")
    for j, col in enumerate(s_cols):
        for i, row in enumerate(g_rows):
            if dot(row, col) != (1 if i == j else 0):
                raise PreconditionError("the section is not a right inverse of the projection")
    box = Polyhedron([[dot(row, v) for row in g_rows] for v in delta.vertices], (), m)
    ineqs, eqs = delta.hrep()
    rows = list(ineqs)
    for n, b in eqs:
        rows.append((n, b))
        rows.append((tuple(-x for x in n), -b))
    up, down = [], []
    for n, b in rows:
        cf = dot(n, f)
        grads = tuple(Fraction(dot(n, col)) for col in s_cols)
        if cf < 0:
            up.append((tuple(-x / cf for x in grads), Fraction(b, cf)))
        elif cf > 0:
            down.append((tuple(x / cf for x in grads), Fraction(-b, cf)))
    if not up or not down:
        raise PreconditionError("fibers of the projection are unbounded")
    curve = projective_line("0", "inf")
    p0, pinf = curve.points
    return DivisorialPolytope(curve, box, {p0: up, pinf: down})


# ---------------------------------------------------------------------------
# equivalence search (rank one)

def _mobius_apply(mat, z):
    a, b, c, d = mat
    if z is INF:
        if c == 0:
            return INF
        return Fraction(a) / c
    num = a * z + b
    den = c * z + d
    if den == 0:
        return INF
    return Fraction(num) / den


def _to_standard(p, q, r):
    """Matrix of the fractional-linear map sending p, q, r to 0, 1, infinity.

    At most one of the three (distinct) points is the infinite one.
    """
    if p is INF:
        return (Fraction(0), q - r, Fraction(1), -r)
    if q is INF:
        return (Fraction(1), -p, Fraction(1), -r)
    if r is INF:
        return (Fraction(1), -p, Fraction(0), q - p)
    return (q - r, -p * (q - r), q - p, -r * (q - p))


def _mobius_through(pairs):
    """A rational 2x2 matrix sending the source points to the targets, or None.

    Fewer than three constraints are padded with fresh fixed points (any
    extension works by sharp 3-transitivity)."""
    pairs = list(pairs)
    fillers_src = [
        x
        for x in (Fraction(101), Fraction(103), Fraction(107))
        if all(s is INF or s != x for s, _ in pairs)
    ]
    fillers_tgt = [
        x
        for x in (Fraction(101), Fraction(103), Fraction(107))
        if all(t is INF or t != x for _, t in pairs)
    ]
    while len(pairs) < 3:
        pairs.append((fillers_src.pop(), fillers_tgt.pop()))
    (z1, w1), (z2, w2), (z3, w3) = pairs[:3]
    m1 = _to_standard(z1, z2, z3)
    m2 = _to_standard(w1, w2, w3)
    a, b, c, d = m2
    if a * d - b * c == 0:
        return None
    inv2 = (d, -b, -c, a)
    a1, b1, c1, d1 = m1
    a2, b2, c2, d2 = inv2
    mat = (
        a2 * a1 + b2 * c1,
        a2 * b1 + b2 * d1,
        c2 * a1 + d2 * c1,
        c2 * b1 + d2 * d1,
    )
    if mat[0] * mat[3] - mat[1] * mat[2] == 0:
        return None
    for (z, w) in pairs:
        if _mobius_apply(mat, z) != w:
            return None
    return mat


def equivalent_rank1(a: DivisorialPolytope, b: DivisorialPolytope):
    """Search for an isomorphism of the pairs described by two rank-one
    divisorial polytopes on the line.

    The search covers lattice flips, fractional-linear reparametrizations of
    the base determined by support points, and shifts by linear families of
    principal divisors supported on the union of the supports.
    """
    if a.rank != 1 or b.rank != 1:
        raise UnsupportedRank("the equivalence search is implemented for rank one")
    if not (a.curve.is_line() and b.curve.is_line()):
        raise PreconditionError("the equivalence search needs projective lines")
    box_a = [a.box.vertices[0][0], a.box.vertices[-1][0]]
    box_b = [b.box.vertices[0][0], b.box.vertices[-1][0]]
    sup_a = list(a.support())
    sup_b = list(b.support())
    a_coords = {q.coord if not q.is_infinity() else INF for q in sup_a}

    for flip in (1, -1):
        if sorted(x * flip for x in box_b) != sorted(box_a):
            continue
        samples = sorted(
            {Fraction(v[0]) for v in b.box.vertices}
            | {u[0] for p in sup_b for u, _ in graph_vertices(b, p)}
            | {Fraction(flip) * u[0] for p in sup_a for u, _ in graph_vertices(a, p)}
        )
        for assignment in _assignments(sup_b, sup_a):
            matched = [(s, t) for s, t in assignment if t is not None]
            unhit = [q for q in sup_a if q not in {t for _, t in matched}]
            pairs = [
                (
                    s.coord if not s.is_infinity() else INF,
                    t.coord if not t.is_infinity() else INF,
                )
                for s, t in matched
            ]
            mat = _mobius_through(pairs)
            if mat is None:
                continue
            if len(pairs) >= 3:
                # the map is pinned: fresh images must really avoid the target support
                bad = False
                for s, t in assignment:
                    if t is None:
                        img = _mobius_apply(mat, s.coord if not s.is_infinity() else INF)
                        if img in a_coords:
                            bad = True
                            break
                if bad:
                    continue
            # residual at each constrained point must be an integral linear shift
            residual_pts = [(s, t) for s, t in assignment] + [(None, q) for q in unhit]
            good = True
            total_shift = Fraction(0)
            for src, tgt in residual_pts:
                table = []
                for u in samples:
                    val_b = b.value(src, u) if src is not None else Fraction(0)
                    val_a = a.value(tgt, Fraction(flip) * u) if tgt is not None else Fraction(0)
                    table.append((u, val_b - val_a))
                nonzero = [(u, r) for u, r in table if u != 0]
                cs = {r / u for u, r in nonzero}
                if len(cs) != 1:
                    if any(r != 0 for _, r in table):
                        good = False
                        break
                    c = Fraction(0)
                else:
                    c = cs.pop()
                if c.denominator != 1 or any(r != c * u for u, r in table):
                    good = False
                    break
                total_shift += c
            if good and total_shift == 0:
                return True
    return False


def _assignments(sources, targets):
    """All injective partial maps sources -> targets (None = fresh image)."""
    if not sources:
        yield []
        return
    first, rest = sources[0], sources[1:]
    for sub in _assignments(rest, targets):
        used = {t for _, t in sub if t is not None}
        yield [(first, None)] + sub
        for t in targets:
            if t not in used:
                yield [(first, t)] + sub
