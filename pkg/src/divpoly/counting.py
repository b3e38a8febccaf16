"""Lattice-point counting, Ehrhart polynomials, volumes and Hilbert bases.

Counting is done by exact enumeration inside bounding boxes, Ehrhart
polynomials by interpolation from exact counts (constant term 1), and volumes
by dilating rational polytopes to lattice ones and reading the leading Ehrhart
coefficient.  Hilbert bases come from a bounded candidate sweep plus an exact
irreducibility test.  Everything is limited to the documented desk scale
(dimension at most 3).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import ceil, floor, lcm

from .errors import NotPointed, PreconditionError, Unbounded, UnsupportedRank
from .geometry import Cone, Polyhedron, is_empty, is_face
from .linalg import det, dot, primitive, vec_sub

MAX_COUNT_DIM = 3


class UniPoly:
    """Univariate polynomial with rational coefficients, ascending order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = [Fraction(c) for c in coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.coeffs = tuple(coeffs)

    def __eq__(self, other):
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "UniPoly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}*k")
            else:
                terms.append(f"{c}*k^{i}")
        return "UniPoly(" + " + ".join(reversed(terms)) + ")"

    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else -1

    def __call__(self, k):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * k + c
        return acc

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [Fraction(0)] * (n - len(self.coeffs))
        b = list(other.coeffs) + [Fraction(0)] * (n - len(other.coeffs))
        return UniPoly([x + y for x, y in zip(a, b)])

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return UniPoly([Fraction(c) * x for x in self.coeffs])

    def __mul__(self, other):
        if not self.coeffs or not other.coeffs:
            return UniPoly([])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    def leading_coefficient(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)


def interpolate(points) -> UniPoly:
    """Lagrange interpolation through (x, y) pairs, exact."""
    result = UniPoly([])
    for i, (xi, yi) in enumerate(points):
        num = UniPoly([yi])
        for j, (xj, _) in enumerate(points):
            if i == j:
                continue
            num = num * UniPoly([Fraction(-xj, 1) / (xi - xj), Fraction(1, 1) / (xi - xj)])
        result = result + num
    return result


# ---------------------------------------------------------------------------
# lattice points

def _bounding_ranges(p: Polyhedron, k=1):
    lo, hi = [], []
    for i in range(p.ambient_rank):
        coords = [k * v[i] for v in p.vertices]
        lo.append(ceil(min(coords)))
        hi.append(floor(max(coords)))
    return lo, hi


def lattice_points(p: Polyhedron, dilation=1):
    """All lattice points of dilation * p (p bounded)."""
    if is_empty(p):
        return []
    if p.rays:
        raise Unbounded("lattice point enumeration needs a bounded polytope")
    if p.ambient_rank > MAX_COUNT_DIM:
        raise UnsupportedRank(f"counting supports dimension <= {MAX_COUNT_DIM}")
    ineqs, eqs = p.hrep()
    lo, hi = _bounding_ranges(p, dilation)
    out = []
    for pt in product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        if all(dot(n, pt) >= dilation * b for n, b in ineqs) and all(
            dot(n, pt) == dilation * b for n, b in eqs
        ):
            out.append(pt)
    return out


def lattice_point_count(p: Polyhedron, dilation=1) -> int:
    return len(lattice_points(p, dilation))


def is_lattice_polytope(p: Polyhedron) -> bool:
    return all(all(x.denominator == 1 for x in v) for v in p.vertices)


def ehrhart(p: Polyhedron) -> UniPoly:
    """Ehrhart polynomial of a lattice polytope of dimension <= 3.

    Degree equals the affine dimension; interpolated from exact counts at
    k = 1..dim together with the constant term 1.
    """
    if is_empty(p):
        raise PreconditionError("the empty polyhedron has no Ehrhart polynomial")
    if p.rays:
        raise Unbounded("Ehrhart polynomial needs a bounded polytope")
    if not is_lattice_polytope(p):
        raise PreconditionError("Ehrhart interpolation needs lattice vertices")
    d = p.dim()
    if d > MAX_COUNT_DIM:
        raise UnsupportedRank(f"Ehrhart supports dimension <= {MAX_COUNT_DIM}")
    pts = [(0, Fraction(1))]
    for k in range(1, d + 1):
        pts.append((k, Fraction(lattice_point_count(p, k))))
    return interpolate(pts)


def euclidean_volume(p: Polyhedron) -> Fraction:
    """Lebesgue volume normalized to the lattice (0 for lower-dimensional p).

    Rational polytopes are dilated to lattice ones; the volume is the leading
    Ehrhart coefficient of the dilation, scaled back.
    """
    if is_empty(p):
        return Fraction(0)
    if p.rays:
        raise Unbounded("volume needs a bounded polytope")
    d = p.ambient_rank
    if p.dim() < d:
        return Fraction(0)
    scale = 1
    for v in p.vertices:
        for x in v:
            scale = lcm(scale, x.denominator)
    q = p.scale(scale) if scale > 1 else p
    lead = ehrhart(q).leading_coefficient()
    return lead / Fraction(scale) ** d


# ---------------------------------------------------------------------------
# vertex smoothness

def edge_directions_at_vertex(p: Polyhedron, v):
    """Primitive directions of the edges (bounded and unbounded) of p at v."""
    v = tuple(Fraction(x) for x in v)
    if v not in p.vertices:
        raise PreconditionError(f"{v} is not a vertex of the polyhedron")
    dirs = []
    for w in p.vertices:
        if w == v:
            continue
        if is_face(Polyhedron([v, w], (), p.ambient_rank), p):
            dirs.append(primitive(vec_sub(w, v)))
    for r in p.rays:
        if is_face(Polyhedron([v], [r], p.ambient_rank), p):
            if r not in dirs:
                dirs.append(r)
    return sorted(set(dirs))


def is_smooth_at_vertex(p: Polyhedron, v) -> bool:
    """True iff the primitive edge directions of p at v form a lattice basis."""
    v = tuple(Fraction(x) for x in v)
    if any(x.denominator != 1 for x in v):
        raise PreconditionError("smoothness is tested at lattice vertices only")
    dirs = edge_directions_at_vertex(p, v)
    if len(dirs) != p.ambient_rank:
        return False
    return abs(det(dirs)) == 1


# ---------------------------------------------------------------------------
# Hilbert bases

MAX_HILBERT_RANK = 3


def _cone_lattice_points_in_box(c: Cone, lo, hi):
    ineqs, eqs = c.hrep()
    out = []
    for pt in product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        if all(dot(n, pt) >= 0 for n in ineqs) and all(dot(e, pt) == 0 for e in eqs):
            out.append(pt)
    return out


def _is_reducible(z, c: Cone) -> bool:
    """Whether z = a + b for nonzero lattice points a, b of the pointed cone c.

    Both summands lie in c and in z - c.  Writing a as a nonnegative
    combination of the extreme rays and bounding the coefficients through a
    functional w that is strictly positive on c gives a finite search box.
    """
    ineqs, eqs = c.hrep()

    def in_cone(x):
        return all(dot(n, x) >= 0 for n in ineqs) and all(dot(e, x) == 0 for e in eqs)

    zero = tuple(0 for _ in z)
    w = tuple(sum(n[i] for n in ineqs) for i in range(c.ambient_rank))
    wz = dot(w, z)
    bounds = []
    for j in range(c.ambient_rank):
        b = Fraction(0)
        for r in c.rays:
            b += Fraction(wz, dot(w, r)) * abs(r[j])
        bounds.append(floor(b))
    for a in product(*(range(-b, b + 1) for b in bounds)):
        if a == zero or a == z:
            continue
        if in_cone(a) and in_cone(vec_sub(z, a)):
            return True
    return False


def hilbert_basis(c: Cone):
    """Unique minimal generating set of the semigroup of lattice points of a
    pointed cone (rank <= 3).

    Candidates live in the box of the zonotope spanned by the extreme rays;
    irreducibility is checked by an exact bounded search.
    """
    if not c.is_pointed():
        raise NotPointed("Hilbert bases are defined for pointed cones")
    if c.ambient_rank > MAX_HILBERT_RANK:
        raise UnsupportedRank(f"Hilbert basis supports rank <= {MAX_HILBERT_RANK}")
    if not c.rays:
        return []
    lo = [sum(min(0, r[i]) for r in c.rays) for i in range(c.ambient_rank)]
    hi = [sum(max(0, r[i]) for r in c.rays) for i in range(c.ambient_rank)]
    zero = tuple(0 for _ in range(c.ambient_rank))
    basis = []
    for z in _cone_lattice_points_in_box(c, lo, hi):
        if z == zero:
            continue
        if not _is_reducible(z, c):
            basis.append(z)
    return sorted(basis)
