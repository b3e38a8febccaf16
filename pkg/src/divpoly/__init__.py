"""Exact combinatorics of polarized complexity-one torus actions.

The package models the combinatorial dictionary between four descriptions of
the same geometry over a base curve: polyhedral divisors, marked fansy
divisors, support functions, and divisorial polytopes, together with the
geometric invariants readable from them (degree, Hilbert polynomial,
smoothness, generator degrees, projective normality).
"""

from .counting import UniPoly, ehrhart, euclidean_volume, hilbert_basis, lattice_point_count
from .curves import (
    INF,
    NO,
    UNKNOWN,
    YES,
    Curve,
    PointId,
    QDivisor,
    projective_line,
)
from .divisorial import DivisorialPolytope, dualize_psi, equivalent_rank1, toric_downgrade
from .fansy import MarkedFansyDivisor, from_divisorial_fan, to_divisorial_fan
from .geometry import EMPTY, Cone, Fan, Polyhedron, PolyhedralComplex
from .pdiv import PolyhedralDivisor
from .support import SupportFunction, dualize_h
from .cones import cone_divisor, generators, minimal_weights, projectively_normal, recover, recover_divpoly

__version__ = "0.1.0"

__all__ = [
    "Cone",
    "Curve",
    "DivisorialPolytope",
    "EMPTY",
    "Fan",
    "INF",
    "MarkedFansyDivisor",
    "NO",
    "PointId",
    "PolyhedralComplex",
    "Polyhedron",
    "PolyhedralDivisor",
    "QDivisor",
    "SupportFunction",
    "UNKNOWN",
    "UniPoly",
    "YES",
    "cone_divisor",
    "dualize_h",
    "dualize_psi",
    "ehrhart",
    "equivalent_rank1",
    "euclidean_volume",
    "from_divisorial_fan",
    "generators",
    "hilbert_basis",
    "lattice_point_count",
    "minimal_weights",
    "projective_line",
    "projectively_normal",
    "recover",
    "recover_divpoly",
    "to_divisorial_fan",
    "toric_downgrade",
]
