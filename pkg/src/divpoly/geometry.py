"""Exact rational polyhedra, cones, fans and polyhedral complexes.

All bodies are kept in V-representation (vertices + primitive rays) as the
primary form; H-representations are derived on demand and cached.  Conversion
both ways runs through one primitive: facet enumeration of a cone spanned by
finitely many generators, done by scanning subsets of generators for supporting
hyperplanes.  This is exact and entirely adequate at the documented desk scale
(ambient rank at most 3, plus one homogenizing coordinate).

Canonical form: vertices sorted lexicographically, rays primitive and sorted,
lineality generators primitive, sign-normalized and sorted.  Equality of bodies
is equality of canonical forms.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product

from .errors import EmptyInput, NotPointed, RankMismatch, Unbounded
from .linalg import (
    dot,
    frac_vec,
    is_zero,
    nullspace,
    primitive,
    rank,
    rref,
    sign_normalized,
    vec_add,
    vec_neg,
    vec_sub,
)


# ---------------------------------------------------------------------------
# facet enumeration

def _dedupe_primitive(vectors):
    seen = []
    out = []
    for v in vectors:
        p = primitive(v)
        if is_zero(p) or p in seen:
            continue
        seen.append(p)
        out.append(p)
    return out


def _span_complement(rows, dim):
    """Canonical basis of the orthogonal complement of the row span."""
    red, _ = rref(rows)
    if not red:
        return [tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim)]
    return nullspace(red, dim)


def _facets_of_gens(gens, dim):
    """H-representation of cone(gens): (inequality normals, equality normals).

    Inequality normals are primitive, lie in the linear span of the generators,
    and are exactly the facet normals of the cone inside its span.  Equality
    normals cut out the span itself.
    """
    gens = _dedupe_primitive(gens)
    eqs = _span_complement(gens, dim)
    if not gens:
        return [], eqs
    r = rank(gens)
    ineqs = set()
    for subset in combinations(range(len(gens)), r - 1):
        rows = [gens[i] for i in subset] + eqs
        kernel = nullspace(rows, dim) if rows else nullspace([], dim)
        if len(kernel) != 1:
            continue
        n = kernel[0]
        pairings = [dot(n, g) for g in gens]
        if all(x >= 0 for x in pairings):
            ineqs.add(n)
        elif all(x <= 0 for x in pairings):
            ineqs.add(vec_neg(n))
    return sorted(ineqs), eqs


# ---------------------------------------------------------------------------
# cones

class Cone:
    """A rational polyhedral cone, possibly with lineality.

    rays: primitive generators of the pointed part (canonical reps orthogonal
    to the lineality space); lineality: canonical basis of the largest linear
    subspace contained in the cone.
    """

    __slots__ = ("rays", "lineality", "ambient_rank", "_hrep")

    def __init__(self, rays, ambient_rank, lineality=(), _canonical=False):
        rays = [tuple(int(x) for x in r) for r in rays]
        lineality = [tuple(int(x) for x in l) for l in lineality]
        for v in list(rays) + list(lineality):
            if len(v) != ambient_rank:
                raise RankMismatch(f"generator {v} has wrong length")
        if not _canonical:
            gens = rays + lineality + [vec_neg(l) for l in lineality]
            ineqs, eqs = _facets_of_gens(gens, ambient_rank)
            canon = cone_from_hrep(ineqs, eqs, ambient_rank)
            rays, lineality = list(canon.rays), list(canon.lineality)
        self.rays = tuple(rays)
        self.lineality = tuple(lineality)
        self.ambient_rank = ambient_rank
        self._hrep = None

    # -- canonical identity
    def __eq__(self, other):
        return (
            isinstance(other, Cone)
            and self.rays == other.rays
            and self.lineality == other.lineality
            and self.ambient_rank == other.ambient_rank
        )

    def __hash__(self):
        return hash((self.rays, self.lineality, self.ambient_rank))

    def __repr__(self):
        if self.lineality:
            return f"Cone(rays={list(self.rays)}, lineality={list(self.lineality)})"
        return f"Cone(rays={list(self.rays)})"

    def sort_key(self):
        return (self.rays, self.lineality)

    # -- structure
    def hrep(self):
        """(inequality normals, equality normals) with x in cone iff
        <n,x> >= 0 for all inequalities and <e,x> = 0 for all equalities."""
        if self._hrep is None:
            gens = list(self.rays) + list(self.lineality) + [vec_neg(l) for l in self.lineality]
            self._hrep = _facets_of_gens(gens, self.ambient_rank)
        return self._hrep

    def is_pointed(self):
        return not self.lineality

    def dim(self):
        gens = list(self.rays) + list(self.lineality)
        return rank(gens) if gens else 0

    def is_full_dimensional(self):
        return self.dim() == self.ambient_rank

    def contains(self, x):
        ineqs, eqs = self.hrep()
        return all(dot(n, x) >= 0 for n in ineqs) and all(dot(e, x) == 0 for e in eqs)

    def generators(self):
        return list(self.rays) + list(self.lineality) + [vec_neg(l) for l in self.lineality]


def cone_from_hrep(ineqs, eqs, dim):
    """The cone {x : <n,x> >= 0, <e,x> = 0} in canonical V-form.

    Extreme rays of the cone are the facet normals of the cone spanned by the
    constraint normals (duality), and the lineality space is the common kernel
    of all constraints.
    """
    gens = list(ineqs) + list(eqs) + [vec_neg(e) for e in eqs]
    gens = _dedupe_primitive(gens)
    rays, _ = _facets_of_gens(gens, dim) if gens else ([], None)
    lineality = _span_complement(gens, dim)
    lineality = sorted(sign_normalized(l) for l in lineality)
    c = Cone.__new__(Cone)
    c.rays = tuple(sorted(rays))
    c.lineality = tuple(lineality)
    c.ambient_rank = dim
    c._hrep = None
    return c


def full_space_cone(dim):
    basis = [tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim)]
    return Cone([], dim, lineality=basis)


def zero_cone(dim):
    return Cone([], dim)


def dual_cone(c: Cone) -> Cone:
    """Dual cone {u : <u,x> >= 0 for all x in c}."""
    return cone_from_hrep(c.rays, c.lineality, c.ambient_rank)


def cone_intersect(a: Cone, b: Cone) -> Cone:
    if a.ambient_rank != b.ambient_rank:
        raise RankMismatch("cannot intersect cones of different ambient rank")
    ia, ea = a.hrep()
    ib, eb = b.hrep()
    return cone_from_hrep(list(ia) + list(ib), list(ea) + list(eb), a.ambient_rank)


def face_of_cone(c: Cone, u) -> Cone:
    """The face of c on which u attains its minimum (= 0); u must pair >= 0."""
    if any(dot(u, r) < 0 for r in c.rays) or any(dot(u, l) != 0 for l in c.lineality):
        raise Unbounded(f"functional {tuple(u)} is unbounded below on the cone")
    ineqs, eqs = c.hrep()
    return cone_from_hrep(ineqs, list(eqs) + [tuple(u)], c.ambient_rank)


def cone_is_face(f: Cone, c: Cone) -> bool:
    """True iff f is a face of c (f = Face(c, u) for some u, or f = c)."""
    if f.ambient_rank != c.ambient_rank:
        return False
    if f == c:
        return True
    ineqs, eqs = c.hrep()
    gens = f.generators()
    if not all(c.contains(g) for g in gens):
        return False
    active = [n for n in ineqs if all(dot(n, g) == 0 for g in gens)]
    if not active:
        return False
    u = tuple(sum(n[i] for n in active) for i in range(c.ambient_rank))
    return face_of_cone(c, u) == f


def cone_faces(c: Cone):
    """All faces of c (including c itself and its minimal face)."""
    ineqs, eqs = c.hrep()
    seen = set()
    out = []
    for k in range(len(ineqs) + 1):
        for subset in combinations(ineqs, k):
            face = cone_from_hrep(ineqs, list(eqs) + list(subset), c.ambient_rank)
            if face not in seen:
                seen.add(face)
                out.append(face)
    return out


# ---------------------------------------------------------------------------
# polyhedra

class EmptyPolyhedron:
    """Distinct sentinel for the empty polyhedron (absorbing coefficient)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "EMPTY"


EMPTY = EmptyPolyhedron()


def is_empty(p) -> bool:
    return p is EMPTY or isinstance(p, EmptyPolyhedron)


class Polyhedron:
    """conv(vertices) + cone(rays) with pointed tail cone, in canonical form."""

    __slots__ = ("vertices", "rays", "ambient_rank", "_hrep")

    def __init__(self, vertices, rays=(), ambient_rank=None, _canonical=False):
        vertices = [frac_vec(v) for v in vertices]
        rays = [tuple(int(x) for x in r) for r in rays]
        if not vertices:
            raise EmptyInput("a polyhedron needs at least one vertex; use EMPTY for the empty set")
        if ambient_rank is None:
            ambient_rank = len(vertices[0])
        for v in vertices:
            if len(v) != ambient_rank:
                raise RankMismatch(f"vertex {v} has wrong length")
        for r in rays:
            if len(r) != ambient_rank:
                raise RankMismatch(f"ray {r} has wrong length")
        if not _canonical:
            vertices, rays = _poly_canonicalize(vertices, rays, ambient_rank)
        self.vertices = tuple(vertices)
        self.rays = tuple(rays)
        self.ambient_rank = ambient_rank
        self._hrep = None

    def __eq__(self, other):
        return (
            isinstance(other, Polyhedron)
            and self.vertices == other.vertices
            and self.rays == other.rays
            and self.ambient_rank == other.ambient_rank
        )

    def __hash__(self):
        return hash((self.vertices, self.rays, self.ambient_rank))

    def __repr__(self):
        if self.rays:
            return f"Polyhedron(vertices={[tuple(map(str, v)) for v in self.vertices]}, rays={list(self.rays)})"
        return f"Polyhedron(vertices={[tuple(map(str, v)) for v in self.vertices]})"

    def sort_key(self):
        return (self.vertices, self.rays)

    def hrep(self):
        """([(normal, rhs)] inequalities <n,x> >= b, [(normal, rhs)] equalities)."""
        if self._hrep is None:
            lifted = [v + (Fraction(1),) for v in self.vertices] + [r + (0,) for r in self.rays]
            ineqs, eqs = _facets_of_gens(lifted, self.ambient_rank + 1)
            self._hrep = (
                [(n[:-1], -Fraction(n[-1])) for n in ineqs],
                [(e[:-1], -Fraction(e[-1])) for e in eqs],
            )
        return self._hrep

    def tail(self) -> Cone:
        return Cone(self.rays, self.ambient_rank)

    def is_bounded(self):
        return not self.rays

    def contains(self, x):
        ineqs, eqs = self.hrep()
        return all(dot(n, x) >= b for n, b in ineqs) and all(dot(n, x) == b for n, b in eqs)

    def dim(self):
        v0 = self.vertices[0]
        rows = [vec_sub(v, v0) for v in self.vertices[1:]] + list(self.rays)
        return rank(rows) if rows else 0

    def is_full_dimensional(self):
        return self.dim() == self.ambient_rank

    def translate(self, t):
        return Polyhedron([vec_add(v, t) for v in self.vertices], self.rays, self.ambient_rank)

    def scale(self, k):
        k = Fraction(k)
        if k <= 0:
            raise ValueError("dilation factor must be positive")
        return Polyhedron([tuple(k * x for x in v) for v in self.vertices], self.rays, self.ambient_rank)


def _poly_canonicalize(vertices, rays, dim):
    """Irredundant vertex/ray lists of conv(vertices)+cone(rays)."""
    lifted = [v + (Fraction(1),) for v in vertices] + [r + (Fraction(0),) for r in rays]
    lifted = list(dict.fromkeys(primitive(g) for g in lifted))
    d1 = dim + 1
    ineqs, eqs = _facets_of_gens(lifted, d1)
    if _span_complement(ineqs + eqs, d1) != []:
        raise NotPointed("tail cone of the polyhedron is not pointed")
    vs, rs = [], []
    for g in lifted:
        active = [n for n in ineqs if dot(n, g) == 0]
        if rank(active + eqs) != d1 - 1:
            continue
        if g[-1] > 0:
            t = Fraction(g[-1])
            vs.append(tuple(Fraction(x) / t for x in g[:-1]))
        else:
            rs.append(tuple(int(x) for x in g[:-1]))
    return sorted(vs), sorted(rs)


def point(coords) -> Polyhedron:
    return Polyhedron([coords])


def cone_as_polyhedron(c: Cone) -> Polyhedron:
    """A pointed cone viewed as the polyhedron with apex at the origin."""
    if not c.is_pointed():
        raise NotPointed("only pointed cones embed as polyhedra here")
    origin = tuple(Fraction(0) for _ in range(c.ambient_rank))
    return Polyhedron([origin], c.rays, c.ambient_rank)


def polyhedron_from_hrep(ineqs, dim):
    """{x : <n,x> >= b} from a list of (normal, rhs); EMPTY when infeasible.

    Raises NotPointed when the (nonempty) solution set has a non-trivial
    lineality in its recession cone, which this V-representation cannot hold.
    """
    lifted_ineqs = [tuple(n) + (-Fraction(b),) for n, b in ineqs]
    lifted_ineqs.append(tuple([0] * dim) + (1,))
    k = cone_from_hrep(lifted_ineqs, [], dim + 1)
    if k.lineality:
        raise NotPointed("solution set carries a lineality space")
    vs, rs = [], []
    for g in k.rays:
        if g[-1] > 0:
            t = Fraction(g[-1])
            vs.append(tuple(Fraction(x) / t for x in g[:-1]))
        else:
            rs.append(tuple(int(x) for x in g[:-1]))
    if not vs:
        return EMPTY
    p = Polyhedron.__new__(Polyhedron)
    p.vertices = tuple(sorted(vs))
    p.rays = tuple(sorted(rs))
    p.ambient_rank = dim
    p._hrep = None
    return p


def intersect(a, b):
    """Intersection of two polyhedra; EMPTY absorbs."""
    if is_empty(a) or is_empty(b):
        return EMPTY
    if a.ambient_rank != b.ambient_rank:
        raise RankMismatch("cannot intersect polyhedra of different ambient rank")
    ia, ea = a.hrep()
    ib, eb = b.hrep()
    rows = list(ia) + list(ib)
    for n, c in list(ea) + list(eb):
        rows.append((n, c))
        rows.append((vec_neg(n), -c))
    return polyhedron_from_hrep(rows, a.ambient_rank)


def minkowski_sum(a, b):
    """Minkowski sum; EMPTY annihilates (the empty-coefficient convention)."""
    if is_empty(a) or is_empty(b):
        return EMPTY
    if a.ambient_rank != b.ambient_rank:
        raise RankMismatch("cannot add polyhedra of different ambient rank")
    verts = [vec_add(v, w) for v in a.vertices for w in b.vertices]
    return Polyhedron(verts, list(a.rays) + list(b.rays), a.ambient_rank)


def face_of(p: Polyhedron, u) -> Polyhedron:
    """Face(p, u): the subset of p where u attains its minimum."""
    u = tuple(u)
    if any(dot(u, r) < 0 for r in p.rays):
        raise Unbounded(f"functional {u} is unbounded below on the polyhedron")
    m = min(dot(u, v) for v in p.vertices)
    vs = [v for v in p.vertices if dot(u, v) == m]
    rs = [r for r in p.rays if dot(u, r) == 0]
    q = Polyhedron.__new__(Polyhedron)
    q.vertices = tuple(sorted(vs))
    q.rays = tuple(sorted(rs))
    q.ambient_rank = p.ambient_rank
    q._hrep = None
    return q


def is_face(f, p) -> bool:
    """True iff f is a face of p (including EMPTY and p itself)."""
    if is_empty(f):
        return True
    if is_empty(p):
        return False
    if f == p:
        return True
    if not all(p.contains(v) for v in f.vertices):
        return False
    ineqs, eqs = p.hrep()
    active = [
        n
        for n, b in ineqs
        if all(dot(n, v) == b for v in f.vertices) and all(dot(n, r) == 0 for r in f.rays)
    ]
    if not active:
        return False
    u = tuple(sum(n[i] for n in active) for i in range(p.ambient_rank))
    return face_of(p, u) == f


def support_value(p: Polyhedron, u) -> Fraction:
    """min over p of <., u>; requires u in the dual of the tail cone."""
    if any(dot(u, r) < 0 for r in p.rays):
        raise Unbounded(f"functional {tuple(u)} is unbounded below on the polyhedron")
    return min(Fraction(dot(u, v)) for v in p.vertices)


def affine_hull_dim(p) -> int:
    if is_empty(p):
        return -1
    return p.dim()


# ---------------------------------------------------------------------------
# fans

class Fan:
    """A fan stored by its maximal cones (faces are implicit)."""

    __slots__ = ("cones", "ambient_rank")

    def __init__(self, cones, ambient_rank=None):
        cones = list(cones)
        if ambient_rank is None:
            if not cones:
                raise EmptyInput("empty fan needs an explicit ambient rank")
            ambient_rank = cones[0].ambient_rank
        for c in cones:
            if c.ambient_rank != ambient_rank:
                raise RankMismatch("fan cones live in different ambient ranks")
        maximal = []
        for c in dict.fromkeys(cones):
            if any(c != d and _cone_subset(c, d) for d in cones):
                continue
            maximal.append(c)
        self.cones = tuple(sorted(maximal, key=lambda c: c.sort_key()))
        self.ambient_rank = ambient_rank

    def __eq__(self, other):
        return (
            isinstance(other, Fan)
            and self.cones == other.cones
            and self.ambient_rank == other.ambient_rank
        )

    def __hash__(self):
        return hash((self.cones, self.ambient_rank))

    def __repr__(self):
        return f"Fan({list(self.cones)})"

    def all_cones(self):
        seen = set()
        out = []
        for c in self.cones:
            for f in cone_faces(c):
                if f not in seen:
                    seen.add(f)
                    out.append(f)
        return sorted(out, key=lambda c: (c.dim(), c.sort_key()))

    def maximal_cones(self):
        return list(self.cones)

    def contains_cone(self, c: Cone) -> bool:
        return any(cone_is_face(c, m) for m in self.cones)

    def cone_containing(self, v):
        for c in self.cones:
            if c.contains(v):
                return c
        return None


def _cone_subset(a: Cone, b: Cone) -> bool:
    return all(b.contains(g) for g in a.generators())


def fan_is_valid(fan: Fan) -> bool:
    """Pairwise intersections are common faces (the fan axioms on maximal cones)."""
    for a, b in combinations(fan.cones, 2):
        c = cone_intersect(a, b)
        if not (cone_is_face(c, a) and cone_is_face(c, b)):
            return False
    return True


def normal_fan(p: Polyhedron) -> Fan:
    """Inner-normal fan of a bounded polyhedron (minimizing convention)."""
    if is_empty(p):
        raise EmptyInput("the empty polyhedron has no normal fan")
    if p.rays:
        raise Unbounded("normal fan is defined for bounded polyhedra here")
    cones = []
    for v in p.vertices:
        ineqs = [vec_sub(w, v) for w in p.vertices if w != v]
        cones.append(cone_from_hrep(ineqs, [], p.ambient_rank))
    return Fan(cones, p.ambient_rank)


def common_refinement(fans, within: Cone) -> Fan:
    """Coarsest common refinement of the fans, intersected into `within`."""
    dim = within.ambient_rank
    target = within.dim()
    pieces = [within]
    for fan in fans:
        if fan.ambient_rank != dim:
            raise RankMismatch("refinement inputs live in different ambient ranks")
        pieces = [cone_intersect(c, m) for c in pieces for m in fan.cones]
    kept = [c for c in dict.fromkeys(pieces) if c.dim() == target]
    return Fan(kept, dim)


# ---------------------------------------------------------------------------
# polyhedral complexes

class PolyhedralComplex:
    """A polyhedral complex stored by its maximal cells."""

    __slots__ = ("cells", "ambient_rank", "complete")

    def __init__(self, cells, ambient_rank=None, check=True):
        cells = list(cells)
        if ambient_rank is None:
            if not cells:
                raise EmptyInput("empty complex needs an explicit ambient rank")
            ambient_rank = cells[0].ambient_rank
        maximal = []
        for c in dict.fromkeys(cells):
            if any(c != d and _poly_subset(c, d) for d in cells):
                continue
            maximal.append(c)
        self.cells = tuple(sorted(maximal, key=lambda c: c.sort_key()))
        self.ambient_rank = ambient_rank
        if check and not complex_cells_compatible(self.cells):
            raise ValueError("cells do not intersect in common faces")
        self.complete = complex_is_complete(self.cells, ambient_rank)

    def __eq__(self, other):
        return (
            isinstance(other, PolyhedralComplex)
            and self.cells == other.cells
            and self.ambient_rank == other.ambient_rank
        )

    def __hash__(self):
        return hash((self.cells, self.ambient_rank))

    def __repr__(self):
        return f"PolyhedralComplex({list(self.cells)})"

    def vertices(self):
        out = []
        for c in self.cells:
            for v in c.vertices:
                if v not in out:
                    out.append(v)
        return sorted(out)

    def tail_fan(self) -> Fan:
        return Fan([c.tail() for c in self.cells], self.ambient_rank)

    def cell_containing(self, x):
        for c in self.cells:
            if c.contains(x):
                return c
        return None

    def cells_with_tail(self, sigma: Cone):
        return [c for c in self.cells if c.tail() == sigma]


def _poly_subset(a: Polyhedron, b: Polyhedron) -> bool:
    ineqs, eqs = b.hrep()
    return (
        all(b.contains(v) for v in a.vertices)
        and all(dot(n, r) >= 0 for n, _ in ineqs for r in a.rays)
        and all(dot(n, r) == 0 for n, _ in eqs for r in a.rays)
    )


def complex_cells_compatible(cells) -> bool:
    for a, b in combinations(cells, 2):
        c = intersect(a, b)
        if not (is_face(c, a) and is_face(c, b)):
            return False
    return True


def facets_of(p: Polyhedron):
    """The facets (codimension-one faces within the affine hull) of p."""
    ineqs, _ = p.hrep()
    d = p.dim()
    out = []
    for n, _b in ineqs:
        f = face_of(p, n)
        if f.dim() == d - 1:
            out.append(f)
    return out


def complex_is_complete(cells, ambient_rank) -> bool:
    """True iff the cells subdivide the whole ambient space.

    A finite complex of full-dimensional cells covers everything exactly when
    no facet of a maximal cell lies on the boundary of the union, i.e. every
    facet is shared with another maximal cell.
    """
    if not cells:
        return False
    if any(c.dim() != ambient_rank for c in cells):
        return False
    for c in cells:
        for f in facets_of(c):
            if not any(d != c and _poly_subset(f, d) for d in cells):
                return False
    return True
