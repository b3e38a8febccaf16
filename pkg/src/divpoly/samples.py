"""Bundled sample objects and the randomized-instance generator.

The log del Pezzo sample is the running example used throughout the test
suite: base curve the projective line with marked points 0, infinity and 1,
weight interval [-2, 2], and coefficients

    psi_0   = min(2u + 2, u + 1, 2)
    psi_inf = psi_1 = -u/2.

`log_del_pezzo_literal_variant` is a deliberately inconsistent variant of its
affine-cone divisor (first-point vertices shifted by one) that fails the
properness test with witness (-2, 2); the command-line tool recognizes it and
points at the corrected data instead of silently repairing it.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .curves import Curve, PointId, projective_line
from .divisorial import DivisorialPolytope
from .geometry import Cone, Polyhedron
from .pdiv import PolyhedralDivisor


def log_del_pezzo() -> DivisorialPolytope:
    """The bundled log del Pezzo divisorial polytope."""
    curve = projective_line("0", "inf", "1")
    p0 = curve.point("0")
    pinf = curve.point("inf")
    p1 = curve.point("1")
    box = Polyhedron([(-2,), (2,)])
    half = Fraction(-1, 2)
    return DivisorialPolytope(
        curve,
        box,
        {
            p0: [((2,), 2), ((1,), 1), ((0,), 2)],
            pinf: [((half,), 0)],
            p1: [((half,), 0)],
        },
    )


def log_del_pezzo_cone_divisor_data():
    """Curve, tail cone and coefficients of the affine-cone divisor."""
    curve = projective_line("0", "inf", "1")
    sigma = Cone([(-1, 2), (1, 2)], 2)
    d0 = Polyhedron([(0, 2), (1, 1), (2, 2)], sigma.rays)
    dv = Polyhedron([(Fraction(-1, 2), 0)], sigma.rays)
    return curve, sigma, d0, dv


def log_del_pezzo_cone_divisor() -> PolyhedralDivisor:
    curve, sigma, d0, dv = log_del_pezzo_cone_divisor_data()
    return PolyhedralDivisor(
        curve,
        sigma,
        {curve.point("0"): d0, curve.point("inf"): dv, curve.point("1"): dv},
    )


def log_del_pezzo_literal_variant() -> PolyhedralDivisor:
    """The known-inconsistent variant with first-point vertices (-1,2),(0,1),(1,2)."""
    curve = projective_line("0", "inf", "1")
    sigma = Cone([(-1, 2), (1, 2)], 2)
    d0 = Polyhedron([(-1, 2), (0, 1), (1, 2)], sigma.rays)
    dv = Polyhedron([(Fraction(-1, 2), 0)], sigma.rays)
    return PolyhedralDivisor(
        curve,
        sigma,
        {curve.point("0"): d0, curve.point("inf"): dv, curve.point("1"): dv},
    )


LITERAL_VARIANT_NOTE = (
    "input matches a known-inconsistent variant of the bundled log del Pezzo "
    "sample: with first-point vertices (-1,2),(0,1),(1,2) the degree polyhedron "
    "contains (-2,2), which lies outside the tail cone, so the divisor is not "
    "proper; the consistent sample uses vertices (0,2),(1,1),(2,2)"
)


def matches_literal_variant(d: PolyhedralDivisor) -> bool:
    try:
        return d == log_del_pezzo_literal_variant()
    except Exception:
        return False


# ---------------------------------------------------------------------------
# randomized valid instances (rank one, projective line)

_COORD_POOL = ("0", "inf", "1", "-1", "2", "3", "-2", "5")


def random_divisorial_polytope(
    rng: random.Random,
    max_support: int = 4,
    max_box_length: int = 8,
) -> DivisorialPolytope:
    """A random valid rank-one divisorial polytope on the projective line.

    Pieces are piecewise affine interpolations of concave integer sequences on
    the lattice points of the box (so graph vertices are automatically
    integral); one piece gets shifted up until the degree is positive inside
    and nonnegative at the endpoints, which on the line is exactly validity.
    """
    a = rng.randint(-4, 3)
    length = rng.randint(1, max_box_length)
    b = a + length
    n_pts = rng.randint(1, max_support)
    coords = list(_COORD_POOL[: max(n_pts, 3)])
    rng.shuffle(coords)
    coords = coords[:n_pts]
    curve = projective_line(*sorted(coords, key=str))
    points = list(curve.points)

    tables = []
    for _ in points:
        v0 = rng.randint(-3, 3)
        slope = rng.randint(-2, 3)
        vals = [v0]
        for _i in range(length):
            vals.append(vals[-1] + slope)
            if rng.random() < 0.5:
                slope -= rng.randint(0, 2)
        tables.append(vals)

    totals = [sum(t[i] for t in tables) for i in range(length + 1)]
    interior = totals[1:-1]
    deficit = 0
    if interior:
        deficit = max(deficit, 1 - min(interior))
    deficit = max(deficit, -totals[0], -totals[-1])
    if deficit > 0:
        tables[0] = [v + deficit for v in tables[0]]

    pieces = {}
    for p, vals in zip(points, tables):
        affines = []
        for i in range(length):
            slope = vals[i + 1] - vals[i]
            const = vals[i] - slope * (a + i)
            affines.append(((slope,), const))
        if not affines:
            affines = [((0,), vals[0])]
        pieces[p] = affines
    box = Polyhedron([(a,), (b,)])
    return DivisorialPolytope(curve, box, pieces)
