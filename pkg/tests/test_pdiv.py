from fractions import Fraction as F

import pytest

from divpoly.curves import NO, UNKNOWN, YES, Curve, PointId, QDivisor, projective_line
from divpoly.errors import PreconditionError, Unbounded
from divpoly.geometry import EMPTY, Cone, Polyhedron, cone_as_polyhedron, is_empty, point, support_value, zero_cone
from divpoly.pdiv import (
    PolyhedralDivisor,
    degree_poly,
    evaluate,
    intersect_divisors,
    is_face_rel,
    is_proper,
    locus,
    properness_report,
    weight_module_dim,
)
from divpoly.samples import log_del_pezzo_cone_divisor, log_del_pezzo_literal_variant

from conftest import make_rng

Y = projective_line("0", "inf", "1")
P0, PINF, P1 = Y.point("0"), Y.point("inf"), Y.point("1")
SIGMA = Cone([(-1, 2), (1, 2)], 2)
D = log_del_pezzo_cone_divisor()


class TestLocus:
    def test_complete(self):
        removed, complete = locus(D)
        assert complete and removed == []

    def test_affine(self):
        d = PolyhedralDivisor(Y, SIGMA, {PINF: EMPTY})
        removed, complete = locus(d)
        assert not complete and removed == [PINF]


class TestEvaluate:
    def test_boundary_weight(self):
        assert evaluate(D, (-2, 1)) == QDivisor(Y, {P0: -2, PINF: 1, P1: 1})

    def test_zero_weight(self):
        assert evaluate(D, (0, 0)).is_zero()

    def test_interior_weight(self):
        assert evaluate(D, (0, 1)) == QDivisor(Y, {P0: 1})

    def test_outside_dual(self):
        with pytest.raises(Unbounded):
            evaluate(D, (0, -1))

    def test_superadditive(self):
        rng = make_rng("superadditive")
        weights = [(-2, 1), (-1, 1), (0, 1), (1, 1), (2, 1), (0, 2), (3, 2)]
        for _ in range(30):
            u = weights[rng.randrange(len(weights))]
            v = weights[rng.randrange(len(weights))]
            uv = tuple(a + b for a, b in zip(u, v))
            lhs = evaluate(D, uv)
            rhs = evaluate(D, u) + evaluate(D, v)
            for p in (P0, PINF, P1):
                assert lhs.coefficient(p) >= rhs.coefficient(p)

    def test_degree_matches_support_function(self):
        deg = degree_poly(D)
        for u in ((-2, 1), (0, 1), (1, 2), (2, 1)):
            from divpoly.curves import degree

            assert degree(evaluate(D, u)) == support_value(deg, u)


class TestDegree:
    def test_fixture(self):
        assert degree_poly(D) == Polyhedron([(-1, 2), (0, 1), (1, 2)], SIGMA.rays)

    def test_empty_coefficient(self):
        d = PolyhedralDivisor(Y, SIGMA, {PINF: EMPTY})
        assert is_empty(degree_poly(d))

    def test_all_default(self):
        d = PolyhedralDivisor(Y, SIGMA, {})
        assert degree_poly(d) == cone_as_polyhedron(SIGMA)


class TestProperness:
    def test_fixture_proper(self):
        verdict, details = properness_report(D)
        assert verdict is YES
        assert {u for u, _ in details["boundary_weights"]} == {(-2, 1), (2, 1)}

    def test_trivial_not_proper(self):
        assert is_proper(PolyhedralDivisor(Y, SIGMA, {})) is NO

    def test_literal_data(self):
        verdict, details = properness_report(log_del_pezzo_literal_variant())
        assert verdict is NO
        assert details["witness"] == (F(-2), F(2))

    def test_affine_always_proper(self):
        d = PolyhedralDivisor(Y, SIGMA, {PINF: EMPTY})
        assert is_proper(d) is YES

    def test_genus_one_unknown(self):
        # boundary weight (-2,1) evaluates to [q] - [r]: degree 0 but torsion
        # order unknowable without the Jacobian
        curve = Curve("abstract", 1, (PointId("q"), PointId("r")))
        q, r = curve.points
        d = PolyhedralDivisor(
            curve,
            SIGMA,
            {
                q: Polyhedron([(F(1, 2), 2)], SIGMA.rays),
                r: Polyhedron([(F(1, 2), 0)], SIGMA.rays),
            },
        )
        assert is_proper(d) is UNKNOWN


class TestIntersect:
    def test_self(self):
        assert intersect_divisors(D, D) == D

    def test_fansy_expansion_intersection(self):
        ray_r = Cone([(1, 2)], 2)
        ray_l = Cone([(-1, 2)], 2)
        dr = PolyhedralDivisor(
            Y,
            ray_r,
            {
                P0: Polyhedron([(2, 2)], [(1, 2)]),
                PINF: Polyhedron([(F(-1, 2), 0)], [(1, 2)]),
                P1: Polyhedron([(F(-1, 2), 0)], [(1, 2)]),
            },
        )
        dl = PolyhedralDivisor(
            Y,
            ray_l,
            {
                P0: Polyhedron([(0, 2)], [(-1, 2)]),
                PINF: Polyhedron([(F(-1, 2), 0)], [(-1, 2)]),
                P1: Polyhedron([(F(-1, 2), 0)], [(-1, 2)]),
            },
        )
        inter = intersect_divisors(dr, dl)
        assert inter.tail == zero_cone(2)
        assert is_empty(inter.coefficient(P0))
        assert inter.coefficient(PINF) == point((F(-1, 2), 0))

    def test_opposite_rays(self):
        a = PolyhedralDivisor(Y, Cone([(1,)], 1), {P0: Polyhedron([(0,)], [(1,)])})
        b = PolyhedralDivisor(Y, Cone([(-1,)], 1), {P0: Polyhedron([(2,)], [(-1,)])})
        inter = intersect_divisors(a, b)
        assert inter.coefficient(P0) == Polyhedron([(0,), (2,)])


class TestFaceRelation:
    def test_reflexive(self):
        assert is_face_rel(D, D) is True

    def test_degree_condition_violated(self):
        dp = PolyhedralDivisor(
            Y,
            zero_cone(2),
            {P0: point((2, 2)), PINF: point((F(-1, 2), 0)), P1: point((F(-1, 2), 0))},
        )
        assert is_face_rel(dp, D) is False

    def test_affine_face(self):
        dp = PolyhedralDivisor(
            Y,
            zero_cone(2),
            {P0: EMPTY, PINF: point((F(-1, 2), 0)), P1: point((F(-1, 2), 0))},
        )
        assert is_face_rel(dp, D) is True

    def test_ray_face(self):
        ray = Cone([(1, 2)], 2)
        dp = PolyhedralDivisor(
            Y,
            ray,
            {
                P0: Polyhedron([(2, 2)], [(1, 2)]),
                PINF: Polyhedron([(F(-1, 2), 0)], [(1, 2)]),
                P1: Polyhedron([(F(-1, 2), 0)], [(1, 2)]),
            },
        )
        assert is_face_rel(dp, D) is True

    def test_transitive(self):
        ray = Cone([(1, 2)], 2)
        dp = PolyhedralDivisor(
            Y,
            ray,
            {
                P0: Polyhedron([(2, 2)], [(1, 2)]),
                PINF: Polyhedron([(F(-1, 2), 0)], [(1, 2)]),
                P1: Polyhedron([(F(-1, 2), 0)], [(1, 2)]),
            },
        )
        dpp = PolyhedralDivisor(
            Y,
            zero_cone(2),
            {P0: EMPTY, PINF: point((F(-1, 2), 0)), P1: point((F(-1, 2), 0))},
        )
        assert is_face_rel(dp, D) is True
        assert is_face_rel(dpp, dp) is True
        assert is_face_rel(dpp, D) is True

    def test_improper_base_rejected(self):
        with pytest.raises(PreconditionError):
            is_face_rel(D, PolyhedralDivisor(Y, SIGMA, {}))


class TestWeightModules:
    def test_values(self):
        assert weight_module_dim(D, (0, 1)) == 2
        assert weight_module_dim(D, (-2, 1)) == 1

    @pytest.mark.parametrize("k,total", [(1, 6), (2, 17), (3, 34)])
    def test_hilbert_cross_check(self, k, total):
        acc = 0
        for u in range(-2 * k, 2 * k + 1):
            acc += weight_module_dim(D, (u, k))
        assert acc == total

    def test_invariant_constructor_checks(self):
        with pytest.raises(PreconditionError):
            PolyhedralDivisor(Y, SIGMA, {P0: Polyhedron([(0, 0)], [(1, 2)])})
