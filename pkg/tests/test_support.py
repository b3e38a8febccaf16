from fractions import Fraction as F

import pytest

from divpoly.curves import NO, UNKNOWN, YES, Curve, PointId, QDivisor, projective_line
from divpoly.divisorial import dualize_psi
from divpoly.errors import PreconditionError
from divpoly.fansy import MarkedFansyDivisor
from divpoly.geometry import Cone, Fan, Polyhedron, is_empty, point
from divpoly.samples import log_del_pezzo
from divpoly.support import (
    SupportFunction,
    add,
    dual_at,
    dualize_h,
    is_ample,
    is_cartier,
    restrict_zero,
    scale,
    sections_dim,
    weight_polytope,
    zero_support_function,
)

RAY_POS = Cone([(1,)], 1)
RAY_NEG = Cone([(-1,)], 1)


def ldp_pair():
    psi = log_del_pezzo()
    base, h = dualize_psi(psi)
    return psi, base, h


def perturbed_constant(base, h, cell_index=3, new_constant=F(5, 2)):
    """Copy of h with one affine constant at the first point replaced."""
    pieces = {}
    for p, data in h.pieces:
        cells = {cell: (g, a) for cell, g, a in data}
        if p.label == "0":
            cell, g, a = data[cell_index]
            cells[cell] = (g, new_constant)
        pieces[p] = cells
    return SupportFunction(base, dict(h.linear), pieces)


class TestRestrictions:
    def test_fixture_restrictions(self):
        psi, base, h = ldp_pair()
        curve = base.curve
        expect_pos = QDivisor(curve, {curve.point("0"): 2, curve.point("inf"): -1, curve.point("1"): -1})
        assert restrict_zero(h, RAY_POS) == expect_pos
        assert restrict_zero(h, RAY_NEG) == -expect_pos

    def test_pure_linear_part(self):
        curve = projective_line("0")
        fan = Fan([RAY_POS, RAY_NEG])
        base = MarkedFansyDivisor(curve, fan, {}, [])
        h = zero_support_function(base)
        assert restrict_zero(h, RAY_POS).is_zero()


class TestCartier:
    def test_fixture(self):
        _psi, _base, h = ldp_pair()
        assert is_cartier(h) is YES

    def test_nonintegral_constant(self):
        _psi, base, h = ldp_pair()
        bad = perturbed_constant(base, h)
        assert is_cartier(bad) is NO

    def test_genus_one_unknown(self):
        curve = Curve("abstract", 1, (PointId("q"), PointId("r")))
        q, r = curve.points
        fan = Fan([RAY_POS, RAY_NEG])
        cells = {
            Polyhedron([(0,)], [(1,)]): None,
            Polyhedron([(0,)], [(-1,)]): None,
        }
        base = MarkedFansyDivisor(
            curve,
            fan,
            {},
            [RAY_POS, RAY_NEG],
        )
        pieces = {
            q: {
                Polyhedron([(0,)], [(1,)]): ((0,), F(1)),
                Polyhedron([(0,)], [(-1,)]): ((0,), F(1)),
            },
            r: {
                Polyhedron([(0,)], [(1,)]): ((0,), F(-1)),
                Polyhedron([(0,)], [(-1,)]): ((0,), F(-1)),
            },
        }
        # constant pieces over the trivial subdivisions; restriction is q - r
        slices = {
            q: base.slice_at(q),
            r: base.slice_at(r),
        }
        base = MarkedFansyDivisor(curve, fan, slices, [RAY_POS, RAY_NEG])
        h = SupportFunction(base, {RAY_POS: (0,), RAY_NEG: (0,)}, pieces)
        assert is_cartier(h) is UNKNOWN


class TestAmple:
    def test_fixture(self):
        _psi, _base, h = ldp_pair()
        assert is_ample(h) is YES

    def test_flattened_not_strictly_concave(self):
        _psi, base, h = ldp_pair()
        pieces = {}
        for p, data in h.pieces:
            cells = {cell: (g, a) for cell, g, a in data}
            if p.label == "0":
                for cell, g, a in data:
                    if not cell.rays:  # the two bounded cells
                        cells[cell] = ((0,), F(-2))
            pieces[p] = cells
        flat = SupportFunction(base, dict(h.linear), pieces)
        assert flat.validate()[0] is YES
        assert is_ample(flat) is NO

    def test_unmarked_ray_degree(self):
        _psi, base, h = ldp_pair()
        smaller = MarkedFansyDivisor(base.curve, base.tailfan, dict(base.slices), [RAY_NEG])
        h2 = SupportFunction(smaller, dict(h.linear),
                             {p: {cell: (g, a) for cell, g, a in data} for p, data in h.pieces})
        assert is_ample(h2) is NO

    def test_cartier_failure_raises(self):
        _psi, base, h = ldp_pair()
        bad = perturbed_constant(base, h)
        with pytest.raises(PreconditionError):
            is_ample(bad)


class TestWeightPolytope:
    def test_fixture(self):
        _psi, _base, h = ldp_pair()
        assert weight_polytope(h) == Polyhedron([(-2,), (2,)])

    def test_zero_function(self):
        curve = projective_line("0")
        fan = Fan([RAY_POS, RAY_NEG])
        base = MarkedFansyDivisor(curve, fan, {}, [])
        assert weight_polytope(zero_support_function(base)) == point((0,))

    def test_kinked_linear_part(self):
        # linear part min(0, -v): gradient 0 on the negative ray, -1 on the positive
        curve = projective_line("0")
        fan = Fan([RAY_POS, RAY_NEG])
        base = MarkedFansyDivisor(curve, fan, {}, [])
        h = SupportFunction(base, {RAY_POS: (-1,), RAY_NEG: (0,)}, {})
        assert weight_polytope(h) == Polyhedron([(-1,), (0,)])


class TestDuality:
    def test_round_trip(self):
        psi, _base, h = ldp_pair()
        assert dualize_h(h) == psi

    def test_dual_at_weights(self):
        psi, base, h = ldp_pair()
        curve = base.curve
        assert dual_at(h, (0,)) == QDivisor(curve, {curve.point("0"): 1})
        assert sections_dim(h, (0,)) == 2
        assert sections_dim(h, (3,)) == 0
        assert sum(sections_dim(h, (u,)) for u in range(-2, 3)) == 6

    def test_minus_restriction_matches_dual_vertex(self):
        psi, base, h = ldp_pair()
        for sigma, u in ((RAY_POS, (-2,)), (RAY_NEG, (2,))):
            assert -restrict_zero(h, sigma) == dual_at(h, u)

    def test_not_ample_rejected(self):
        curve = projective_line("0")
        fan = Fan([RAY_POS, RAY_NEG])
        base = MarkedFansyDivisor(curve, fan, {}, [])
        with pytest.raises(PreconditionError):
            dualize_h(zero_support_function(base))

    def test_injectivity_perturbation(self):
        # shear every piece (and the linear part) by the same lattice linear
        # functional: stays ample Cartier, but the dual box translates
        psi, base, h = ldp_pair()
        pieces = {
            p: {cell: ((g[0] + 1,), a) for cell, g, a in data} for p, data in h.pieces
        }
        linear = {c: (g[0] + 1,) for c, g in h.linear}
        h2 = SupportFunction(base, linear, pieces)
        assert h2 != h
        assert is_ample(h2) is YES
        psi2 = dualize_h(h2)
        assert psi2 != psi
        assert psi2.box == Polyhedron([(-1,), (3,)])


class TestGroupStructure:
    def test_add_zero(self):
        _psi, base, h = ldp_pair()
        zero_pieces = {
            p: {cell: ((0,), F(0)) for cell, _g, _a in data} for p, data in h.pieces
        }
        # the additive unit on the same base: linear part zero on every cone
        z = SupportFunction(base, {c: (0,) for c in base.tailfan.cones}, zero_pieces)
        assert add(h, z) == h

    def test_scale_doubles_restriction(self):
        _psi, base, h = ldp_pair()
        doubled = scale(2, h)
        curve = base.curve
        assert restrict_zero(doubled, RAY_POS) == QDivisor(
            curve, {curve.point("0"): 4, curve.point("inf"): -2, curve.point("1"): -2}
        )

    def test_restrictions_add(self):
        _psi, base, h = ldp_pair()
        two = add(h, h)
        assert restrict_zero(two, RAY_POS) == restrict_zero(h, RAY_POS).scale(2)
        assert two == scale(2, h)

    def test_base_mismatch(self):
        _psi, base, h = ldp_pair()
        smaller = MarkedFansyDivisor(base.curve, base.tailfan, dict(base.slices), [RAY_NEG])
        h2 = SupportFunction(smaller, dict(h.linear),
                             {p: {cell: (g, a) for cell, g, a in data} for p, data in h.pieces})
        with pytest.raises(PreconditionError):
            add(h, h2)


class TestValidation:
    def test_fixture_clean(self):
        _psi, _base, h = ldp_pair()
        verdict, problems = h.validate()
        assert verdict is YES and problems == []

    def test_perturbed_reports_problems(self):
        _psi, base, h = ldp_pair()
        bad = perturbed_constant(base, h)
        verdict, problems = bad.validate()
        assert verdict is NO
        assert any("integrality" in p or "discontinuous" in p for p in problems)
