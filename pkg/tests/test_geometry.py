from fractions import Fraction as F

import pytest

from divpoly.errors import NotPointed, RankMismatch, Unbounded
from divpoly.geometry import (
    EMPTY,
    Cone,
    Fan,
    Polyhedron,
    PolyhedralComplex,
    cone_as_polyhedron,
    cone_intersect,
    cone_is_face,
    common_refinement,
    dual_cone,
    face_of,
    face_of_cone,
    fan_is_valid,
    full_space_cone,
    intersect,
    is_empty,
    is_face,
    minkowski_sum,
    normal_fan,
    point,
    polyhedron_from_hrep,
    zero_cone,
)

SIGMA = Cone([(-1, 2), (1, 2)], 2)
SIGMA_DUAL = Cone([(-2, 1), (2, 1)], 2)
D0 = Polyhedron([(0, 2), (1, 1), (2, 2)], SIGMA.rays)
DV = Polyhedron([(F(-1, 2), 0)], SIGMA.rays)


class TestMinkowski:
    def test_interval_doubling(self):
        iv = Polyhedron([(-1,), (1,)])
        assert minkowski_sum(iv, iv) == Polyhedron([(-2,), (2,)])

    def test_degree_of_cone_divisor(self):
        s = minkowski_sum(minkowski_sum(D0, DV), DV)
        assert s == Polyhedron([(-1, 2), (0, 1), (1, 2)], SIGMA.rays)

    def test_identity(self):
        assert minkowski_sum(D0, point((0, 0))) == D0

    def test_empty_annihilates(self):
        assert is_empty(minkowski_sum(EMPTY, D0))
        assert is_empty(minkowski_sum(D0, EMPTY))

    def test_commutative_associative(self):
        a = Polyhedron([(0, 0), (1, 0)])
        b = Polyhedron([(0, 0), (0, 2)])
        c = Polyhedron([(1, 1)])
        assert minkowski_sum(a, b) == minkowski_sum(b, a)
        assert minkowski_sum(minkowski_sum(a, b), c) == minkowski_sum(a, minkowski_sum(b, c))

    def test_tail_adds(self):
        r1 = Polyhedron([(0, 0)], [(1, 0)])
        r2 = Polyhedron([(0, 0)], [(0, 1)])
        assert set(minkowski_sum(r1, r2).rays) == {(1, 0), (0, 1)}

    def test_rank_mismatch(self):
        with pytest.raises(RankMismatch):
            minkowski_sum(Polyhedron([(0,)]), Polyhedron([(0, 0)]))


class TestFaces:
    def test_interval_face(self):
        assert face_of(Polyhedron([(-2,), (2,)]), (1,)) == Polyhedron([(-2,)])

    def test_cone_coefficient_face(self):
        f = face_of(D0, (-2, 1))
        assert f == Polyhedron([(2, 2)], [(1, 2)])
        assert is_face(f, D0)

    def test_zero_functional(self):
        assert face_of(D0, (0, 0)) == D0

    def test_unbounded_direction(self):
        with pytest.raises(Unbounded):
            face_of(D0, (0, -1))

    def test_is_face_cases(self):
        assert is_face(EMPTY, D0)
        assert is_face(D0, D0)
        assert not is_face(point((1, 2)), D0)  # interior point
        assert is_face(point((1, 1)), D0)  # a vertex
        assert is_face(point((1, 1)), Polyhedron([(0, 0), (1, 1), (2, 0)]))


class TestDualCone:
    def test_fixture(self):
        assert dual_cone(SIGMA) == SIGMA_DUAL

    def test_involution(self):
        for c in (SIGMA, SIGMA_DUAL, Cone([(1, 0), (1, 4)], 2), zero_cone(2)):
            assert dual_cone(dual_cone(c)) == c

    def test_full_space(self):
        assert dual_cone(full_space_cone(2)) == zero_cone(2)

    def test_self_dual_orthant(self):
        orthant = Cone([(1, 0), (0, 1)], 2)
        assert dual_cone(orthant) == orthant

    def test_pairings_nonnegative(self):
        d = dual_cone(SIGMA)
        for u in d.rays:
            for r in SIGMA.rays:
                assert u[0] * r[0] + u[1] * r[1] >= 0


class TestNormalFan:
    def test_interval(self):
        fan = normal_fan(Polyhedron([(-2,), (2,)]))
        assert set(fan.cones) == {Cone([(1,)], 1), Cone([(-1,)], 1)}

    def test_tilde_delta_zero(self):
        p = Polyhedron([(-2, -2), (-1, 0), (1, 2), (2, 2), (2, -2)])
        fan = normal_fan(p)
        assert len(fan.cones) == 5
        assert all(c.is_full_dimensional() for c in fan.cones)
        assert fan_is_valid(fan)

    def test_point(self):
        fan = normal_fan(point((3, 4)))
        assert fan.cones == (full_space_cone(2),)


class TestRefinement:
    def test_fixture_split(self):
        left = Cone([(-2, 1), (-1, 1)], 2)
        mid = Cone([(-1, 1), (1, 1)], 2)
        right = Cone([(1, 1), (2, 1)], 2)
        fan_d0 = Fan([left, mid, right])
        trivial = Fan([full_space_cone(2)])
        ref = common_refinement([fan_d0, trivial], within=SIGMA_DUAL)
        assert set(ref.cones) == {left, mid, right}

    def test_within_full_space(self):
        f = Fan([Cone([(1,)], 1), Cone([(-1,)], 1)])
        assert common_refinement([f], within=full_space_cone(1)) == f

    def test_idempotent(self):
        f = Fan([Cone([(1, 0), (1, 1)], 2), Cone([(1, 1), (0, 1)], 2)])
        within = Cone([(1, 0), (0, 1)], 2)
        assert common_refinement([f, f], within=within) == f


class TestConeFaces:
    def test_face_of_cone(self):
        assert face_of_cone(SIGMA_DUAL, (1, 2)) == Cone([(-2, 1)], 2)
        assert face_of_cone(SIGMA_DUAL, (0, 0)) == SIGMA_DUAL

    def test_cone_is_face(self):
        assert cone_is_face(Cone([(-2, 1)], 2), SIGMA_DUAL)
        assert cone_is_face(zero_cone(2), SIGMA_DUAL)
        assert cone_is_face(SIGMA_DUAL, SIGMA_DUAL)
        assert not cone_is_face(Cone([(1, 1)], 2), SIGMA_DUAL)

    def test_intersection(self):
        left = Cone([(-2, 1), (-1, 1)], 2)
        mid = Cone([(-1, 1), (1, 1)], 2)
        assert cone_intersect(left, mid) == Cone([(-1, 1)], 2)


class TestHrep:
    def test_box_roundtrip(self):
        box = polyhedron_from_hrep([((1,), F(-2)), ((-1,), F(-2))], 1)
        assert box == Polyhedron([(-2,), (2,)])

    def test_empty(self):
        assert is_empty(polyhedron_from_hrep([((1,), F(1)), ((-1,), F(1))], 1))

    def test_intersections(self):
        assert intersect(Polyhedron([(0,), (2,)]), Polyhedron([(1,), (3,)])) == Polyhedron([(1,), (2,)])
        assert is_empty(intersect(Polyhedron([(0,), (1,)]), Polyhedron([(2,), (3,)])))

    def test_lineality_rejected(self):
        with pytest.raises(NotPointed):
            Polyhedron([(0, 0)], [(1, 0), (-1, 0)])

    def test_canonicalization_drops_redundant(self):
        p = Polyhedron([(0,), (1,), (2,)])  # middle point is not a vertex
        assert p.vertices == ((F(0),), (F(2),))
        q = Polyhedron([(0, 0)], [(1, 0), (2, 0), (1, 1)])
        assert set(q.rays) == {(1, 0), (1, 1)}


class TestComplexes:
    CELLS = [
        Polyhedron([(0,)], [(-1,)]),
        Polyhedron([(0,), (1,)]),
        Polyhedron([(1,), (2,)]),
        Polyhedron([(2,)], [(1,)]),
    ]

    def test_complete(self):
        cx = PolyhedralComplex(self.CELLS)
        assert cx.complete
        assert cx.tail_fan() == Fan([Cone([(1,)], 1), Cone([(-1,)], 1)])
        assert cx.vertices() == [(F(0),), (F(1),), (F(2),)]

    def test_incomplete(self):
        assert not PolyhedralComplex(self.CELLS[:3]).complete

    def test_bad_cells_rejected(self):
        overlapping = [Polyhedron([(0,), (2,)]), Polyhedron([(1,), (3,)])]
        with pytest.raises(ValueError):
            PolyhedralComplex(overlapping)

    def test_cells_with_tail(self):
        cx = PolyhedralComplex(self.CELLS)
        assert cx.cells_with_tail(Cone([(1,)], 1)) == [self.CELLS[3]]
