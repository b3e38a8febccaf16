"""Brute-force oracles, kept independent of the code paths they check."""

from fractions import Fraction
from itertools import product

from divpoly.geometry import Polyhedron, cone_as_polyhedron, intersect, is_empty
from divpoly.linalg import dot


def convex_hull_2d(points):
    """Monotone-chain hull, exact; returns vertices in counterclockwise order."""
    pts = sorted(set(tuple(Fraction(x) for x in p) for p in points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def shoelace_area(points) -> Fraction:
    """Exact area of the convex hull of 2-d points."""
    hull = convex_hull_2d(points)
    if len(hull) < 3:
        return Fraction(0)
    acc = Fraction(0)
    for (x1, y1), (x2, y2) in zip(hull, hull[1:] + hull[:1]):
        acc += x1 * y2 - x2 * y1
    return abs(acc) / 2


def brute_lattice_count(p: Polyhedron, k: int) -> int:
    """Count via direct membership tests against the scaled H-representation."""
    ineqs, eqs = p.hrep()
    lo = [min(int((k * v[i]).__floor__()) for v in p.vertices) for i in range(p.ambient_rank)]
    hi = [max(int(-((-k * v[i]).__floor__())) for v in p.vertices) for i in range(p.ambient_rank)]
    count = 0
    for pt in product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        if all(dot(n, pt) >= k * b for n, b in ineqs) and all(dot(n, pt) == k * b for n, b in eqs):
            count += 1
    return count


def cone_lattice_points_bounded(cone, bound):
    """Lattice points of the cone with all coordinates within [-bound, bound]."""
    ineqs, eqs = cone.hrep()
    out = []
    for pt in product(*(range(-bound, bound + 1) for _ in range(cone.ambient_rank))):
        if all(dot(n, pt) >= 0 for n in ineqs) and all(dot(e, pt) == 0 for e in eqs):
            out.append(pt)
    return out


def is_nonneg_combination(target, generators, cone):
    """Whether target is a nonnegative integer combination of the generators.

    Peels one generator at a time; every partial remainder of a valid
    decomposition stays inside the (pointed) cone, so the recursion is finite.
    """
    ineqs, eqs = cone.hrep()

    def in_cone(x):
        return all(dot(n, x) >= 0 for n in ineqs) and all(dot(e, x) == 0 for e in eqs)

    zero = tuple(0 for _ in target)
    seen = {}

    def rec(cur):
        if cur == zero:
            return True
        if cur in seen:
            return seen[cur]
        seen[cur] = False
        if not in_cone(cur):
            return False
        for g in generators:
            if rec(tuple(c - x for c, x in zip(cur, g))):
                seen[cur] = True
                return True
        return False

    return rec(tuple(target))


def brute_hilbert_check(cone, basis, bound=10):
    """(coverage, irreducibility) of a claimed Hilbert basis, by brute force.

    Coverage: every lattice point of the cone with coordinates bounded by
    `bound` is a nonnegative integer combination of the basis.  Irreducibility:
    no basis element splits as a sum of two nonzero lattice points of the cone
    (the summands are enumerated inside the exact slab cone . (b - cone)).
    """
    pts = cone_lattice_points_bounded(cone, bound)
    zero = tuple(0 for _ in range(cone.ambient_rank))
    coverage = all(is_nonneg_combination(p, basis, cone) for p in pts if p != zero)
    irreducible = True
    capoly = cone_as_polyhedron(cone)
    for b in basis:
        slab = _shifted_reflection(capoly, b)
        if is_empty(slab):
            continue
        lo = [min(int(v[i].__floor__()) for v in slab.vertices) for i in range(cone.ambient_rank)]
        hi = [max(int(-((-v[i]).__floor__())) for v in slab.vertices) for i in range(cone.ambient_rank)]
        ineqs, eqs = cone.hrep()

        def in_cone(x):
            return all(dot(n, x) >= 0 for n in ineqs) and all(dot(e, x) == 0 for e in eqs)

        for x in product(*(range(a, b2 + 1) for a, b2 in zip(lo, hi))):
            if x == zero or x == b:
                continue
            if in_cone(x) and in_cone(tuple(bb - xx for bb, xx in zip(b, x))):
                irreducible = False
                break
        if not irreducible:
            break
    return coverage, irreducible


def _shifted_reflection(capoly: Polyhedron, b):
    """The polyhedron b - C for the cone-as-polyhedron C."""
    verts = [tuple(bb - Fraction(x) for bb, x in zip(b, v)) for v in capoly.vertices]
    rays = [tuple(-x for x in r) for r in capoly.rays]
    return intersect(capoly, Polyhedron(verts, rays, capoly.ambient_rank))


def supconv_value(psi_a, psi_b, p, u) -> Fraction:
    """Oracle for the semigroup sum: max over decompositions u = u' + u''.

    For piecewise affine concave summands the maximum is attained with u' at a
    breakpoint of the first piece or at u minus a breakpoint of the second, so
    a finite candidate sweep is exact (rank one).
    """
    from divpoly.divisorial import graph_vertices

    u = Fraction(u)
    a_lo, a_hi = psi_a.box.vertices[0][0], psi_a.box.vertices[-1][0]
    b_lo, b_hi = psi_b.box.vertices[0][0], psi_b.box.vertices[-1][0]
    candidates = set()
    for uu, _ in graph_vertices(psi_a, p):
        candidates.add(Fraction(uu[0]))
    for uu, _ in graph_vertices(psi_b, p):
        candidates.add(u - Fraction(uu[0]))
    candidates.add(a_lo)
    candidates.add(a_hi)
    candidates.add(u - b_lo)
    candidates.add(u - b_hi)
    best = None
    for u1 in candidates:
        u2 = u - u1
        if not (a_lo <= u1 <= a_hi and b_lo <= u2 <= b_hi):
            continue
        val = psi_a.value(p, (u1,)) + psi_b.value(p, (u2,))
        if best is None or val > best:
            best = val
    return best


def degree_integral(psi) -> Fraction:
    """Integral of the degree function over a rank-one box (trapezoid rule on
    the exact breakpoints); equals the volume of every derived polytope."""
    from divpoly.divisorial import refinement_vertices

    xs = sorted(Fraction(v[0]) for v in refinement_vertices(psi))
    acc = Fraction(0)
    for x1, x2 in zip(xs, xs[1:]):
        acc += (psi.degree_at((x1,)) + psi.degree_at((x2,))) * (x2 - x1) / 2
    return acc
