from fractions import Fraction as F

import pytest

from divpoly.curves import NO, YES, projective_line
from divpoly.divisorial import dualize_psi
from divpoly.errors import PreconditionError
from divpoly.fansy import (
    MarkedFansyDivisor,
    dsigma,
    from_divisorial_fan,
    to_divisorial_fan,
    validate,
)
from divpoly.geometry import Cone, Fan, Polyhedron, PolyhedralComplex, zero_cone
from divpoly.pdiv import PolyhedralDivisor, is_face_rel, is_proper, locus
from divpoly.samples import log_del_pezzo

RAY_POS = Cone([(1,)], 1)
RAY_NEG = Cone([(-1,)], 1)


def ldp_base():
    base, _h = dualize_psi(log_del_pezzo())
    return base


class TestValidate:
    def test_fixture_valid(self):
        base = ldp_base()
        verdict, report = validate(base)
        assert verdict is YES
        assert [p.label for p, _ in base.slices] == ["0", "1", "inf"]
        sl0 = base.slice_at(base.curve.point("0"))
        assert sorted(v[0] for v in sl0.vertices()) == [0, 1, 2]
        slinf = base.slice_at(base.curve.point("inf"))
        assert sorted(v[0] for v in slinf.vertices()) == [F(-1, 2)]
        assert set(base.marks) == {RAY_POS, RAY_NEG}

    def test_unmark_one_ray_still_valid(self):
        base = ldp_base()
        smaller = MarkedFansyDivisor(base.curve, base.tailfan, dict(base.slices), [RAY_NEG])
        verdict, _ = validate(smaller)
        assert verdict is YES

    def test_marking_origin_invalid(self):
        base = ldp_base()
        bad = MarkedFansyDivisor(
            base.curve, base.tailfan, dict(base.slices), [RAY_POS, RAY_NEG, zero_cone(1)]
        )
        verdict, report = validate(bad)
        assert verdict is NO
        assert report["degree_marks"][0] is NO

    def test_incomplete_slice_invalid(self):
        curve = projective_line("0", "inf")
        fan = Fan([RAY_POS, RAY_NEG])
        half = PolyhedralComplex([Polyhedron([(0,)], [(1,)])], 1)
        bad = MarkedFansyDivisor(curve, fan, {curve.point("0"): half}, [])
        verdict, report = validate(bad)
        assert verdict is NO
        assert report["slices"][0] is NO

    def test_marks_upward_closed_checked(self):
        # a lower-dimensional mark whose containing cones are unmarked
        curve = projective_line("0", "inf")
        fan = Fan([RAY_POS, RAY_NEG])
        bad = MarkedFansyDivisor(curve, fan, {}, [zero_cone(1)])
        verdict, report = validate(bad)
        assert verdict is NO
        assert report["upward_closure"][0] is NO


class TestDsigma:
    def test_fixture_positive_ray(self):
        base = ldp_base()
        d = dsigma(base, RAY_POS)
        p0 = base.curve.point("0")
        pinf = base.curve.point("inf")
        assert d.coefficient(p0) == Polyhedron([(2,)], [(1,)])
        assert d.coefficient(pinf) == Polyhedron([(F(-1, 2),)], [(1,)])
        assert is_proper(d) is YES

    def test_fixture_negative_ray(self):
        base = ldp_base()
        d = dsigma(base, RAY_NEG)
        p0 = base.curve.point("0")
        assert d.coefficient(p0) == Polyhedron([(0,)], [(-1,)])
        assert is_proper(d) is YES

    def test_trivial(self):
        curve = projective_line("0")
        fan = Fan([RAY_POS, RAY_NEG])
        x = MarkedFansyDivisor(curve, fan, {}, [])
        d = dsigma(x, RAY_POS)
        assert d.coeffs == ()
        assert d.tail == RAY_POS

    def test_requires_full_dimensional(self):
        base = ldp_base()
        with pytest.raises(PreconditionError):
            dsigma(base, zero_cone(1))


class TestExpansion:
    def test_fixture_roundtrip(self):
        base = ldp_base()
        family = to_divisorial_fan(base)
        assert from_divisorial_fan(family) == base
        # both rays marked; their intersection drops to an affine chart
        complete = [d for d in family if locus(d)[1]]
        assert len(complete) == 2
        for d in family:
            rel = is_proper(d)
            assert rel is YES or any(
                d != e and is_face_rel(d, e) is True for e in family if is_proper(e) is YES
            )

    def test_no_marks_gives_affine_generators(self):
        base = ldp_base()
        unmarked = MarkedFansyDivisor(base.curve, base.tailfan, dict(base.slices), [])
        family = to_divisorial_fan(unmarked)
        generators = [d for d in family if not locus(d)[1]]
        assert len(generators) >= 8  # (4+2+2 maximal cells) as affine charts
        assert all(not locus(d)[1] for d in family if d.coeffs)
        assert from_divisorial_fan(family) == unmarked

    def test_trivial_single_mark(self):
        curve = projective_line("0")
        fan = Fan([RAY_POS, RAY_NEG])
        x = MarkedFansyDivisor(curve, fan, {}, [RAY_POS])
        family = to_divisorial_fan(x)
        assert len(family) == 1
        assert family[0].tail == RAY_POS

    def test_missing_intersection_detected(self):
        base = ldp_base()
        family = to_divisorial_fan(base)
        broken = [d for d in family if len(d.tail.rays) == 1]  # drop the origin chart
        with pytest.raises(PreconditionError):
            from_divisorial_fan(broken)

    def test_single_complete_divisor_gets_marked(self):
        base = ldp_base()
        family = to_divisorial_fan(base)
        again = from_divisorial_fan(family)
        assert set(again.marks) == {RAY_POS, RAY_NEG}
