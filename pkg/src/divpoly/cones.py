"""Affine-cone machinery: from an ample support function to a polyhedral
divisor one rank up, back again, and the generator theory of the associated
multigraded section algebra (generator degrees, minimal weights, explicit
generators, projective normality).
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from .curves import (
    NO,
    UNKNOWN,
    YES,
    QDivisor,
    Verdict,
    degree as divisor_degree,
    floor_div,
    h0,
    is_principal,
    product_in,
    section_basis,
)
from .divisorial import DivisorialPolytope
from .errors import PreconditionError, SearchCapExceeded, Unbounded, UnsupportedRank
from .fansy import MarkedFansyDivisor
from .geometry import (
    Cone,
    Fan,
    Polyhedron,
    PolyhedralComplex,
    cone_from_hrep,
    cone_intersect,
    dual_cone,
    intersect,
    is_empty,
    polyhedron_from_hrep,
)
from .linalg import dot, primitive, rref, vec_neg, vec_sub
from .pdiv import (
    PolyhedralDivisor,
    degree_poly,
    evaluate,
    is_proper,
    locus,
)
from .support import SupportFunction, is_ample


# ---------------------------------------------------------------------------
# cone divisor and recovery

def cone_divisor(h: SupportFunction) -> PolyhedralDivisor:
    """The polyhedral divisor (one rank up) of the affine cone over the image
    of the linear system of h: coefficients are the regions above the graphs
    of the negated pieces."""
    amp = is_ample(h)
    if amp is NO:
        raise PreconditionError("the cone construction needs an ample support function")
    if amp is UNKNOWN:
        raise PreconditionError("ampleness could not be certified on this base curve")
    rank = h.base.ambient_rank
    tail_gens = []
    for cone, g in h.linear:
        for r in cone.rays:
            tail_gens.append(tuple(r) + (-dot(g, r),))
    tail_gens.append(tuple([0] * rank) + (1,))
    tail = Cone(tail_gens, rank + 1)
    coeffs = {}
    for p, data in h.pieces:
        pts = set()
        for cell, g, a in data:
            for v in cell.vertices:
                val = Fraction(dot(g, v)) + a
                pts.add(tuple(v) + (-val,))
        rays = list(tail.rays)
        coeffs[p] = Polyhedron(sorted(pts), rays, rank + 1)
    return PolyhedralDivisor(h.base.curve, tail, coeffs)


def _lower_envelope_affines(poly: Polyhedron):
    """Affine pieces (gradient, constant) of the lower boundary of a
    polyhedron in the last coordinate: min {t : (v, t) in poly} as a max of
    affines in v."""
    ineqs, _eqs = poly.hrep()
    out = []
    for n, b in ineqs:
        c = n[-1]
        if c > 0:
            g = tuple(-Fraction(x) / c for x in n[:-1])
            out.append((g, Fraction(b) / c))
    return out


def recover(d: PolyhedralDivisor, curve=None):
    """Marked fansy divisor and support function from a proper polyhedral
    divisor on N + Z, graded by the last coordinate.

    The support function at a point is the negated fiberwise minimum of the
    coefficient; marks come from principal restrictions (and the nonempty
    degree rule for lower-dimensional cones)."""
    from .fansy import dsigma
    from .support import restrict_zero

    proper = is_proper(d)
    if proper is NO:
        raise PreconditionError("recovery needs a proper polyhedral divisor")
    curve = curve or d.curve
    rank = d.ambient_rank - 1
    down = tuple([0] * rank) + (-1,)
    if d.tail.contains(down):
        raise Unbounded("fibers are unbounded below in the grading direction")

    piece_affines = {}
    for p, poly in d.coeffs:
        if is_empty(poly):
            raise PreconditionError("recovery needs a complete locus")
        lower = _lower_envelope_affines(poly)
        if not lower:
            raise Unbounded("fibers are unbounded below in the grading direction")
        affines = []
        for g, c in lower:
            grad = tuple(-x for x in g)
            const = -c
            if any(x.denominator != 1 for x in grad):
                raise PreconditionError(
                    "recovered gradients are fractional; the divisor is not the cone "
                    "of an invariant Cartier divisor"
                )
            affines.append((tuple(int(x) for x in grad), const))
        piece_affines[p] = affines

    # linear part: the tail cone is the region above the graph of minus h^0
    tail_lower = _lower_envelope_affines(
        Polyhedron([tuple([Fraction(0)] * (rank + 1))], d.tail.rays, rank + 1)
    )
    lin_affines = [
        (tuple(int(-x) for x in g), -c) for g, c in tail_lower
    ]
    if any(c != 0 for _, c in lin_affines) or not lin_affines:
        raise PreconditionError("tail cone is not the cone over a linear part")

    # slices: linearity regions of each piece; tail fan: those of the linear part
    tailfan_cones = {}
    for g, _ in lin_affines:
        rows = [(vec_sub(g2, g), Fraction(0)) for g2, _ in lin_affines if g2 != g]
        cell = polyhedron_from_hrep(rows, rank)
        if not is_empty(cell) and cell.dim() == rank:
            tailfan_cones[Cone(cell.rays, rank)] = g
    tailfan = Fan(list(tailfan_cones.keys()), rank)

    slices = {}
    pieces = {}
    for p, affines in piece_affines.items():
        cells = {}
        for i, (g, c) in enumerate(affines):
            rows = []
            for j, (g2, c2) in enumerate(affines):
                if i == j:
                    continue
                rows.append((vec_sub(g2, g), c - c2))
            cell = polyhedron_from_hrep(rows, rank)
            if not is_empty(cell) and cell.dim() == rank:
                cells[cell] = (g, c)
        cx = PolyhedralComplex(list(cells.keys()), rank, check=False)
        if cx.tail_fan() != tailfan:
            raise PreconditionError(
                "slice linearity regions do not refine the tail fan; unsupported input"
            )
        slices[p] = cx
        pieces[p] = cells

    base_marks = []
    base = MarkedFansyDivisor(curve, tailfan, slices, [])
    h = SupportFunction(base, tailfan_cones, pieces)
    for sigma in tailfan.cones:
        if sigma.is_full_dimensional() and sigma.is_pointed():
            v = is_principal(restrict_zero(h, sigma))
            if v is UNKNOWN:
                raise PreconditionError(
                    "marks are undecidable: principality is unknown on this curve"
                )
            if v is YES:
                base_marks.append(sigma)
    lower_marks = []
    marked_base = MarkedFansyDivisor(curve, tailfan, slices, base_marks)
    from .geometry import cone_as_polyhedron, cone_faces

    for sigma in base_marks:
        deg = degree_poly(dsigma(marked_base, sigma))
        for tau in cone_faces(sigma):
            if tau == sigma or tau in base_marks or tau in lower_marks:
                continue
            if not is_empty(intersect(deg, cone_as_polyhedron(tau))):
                lower_marks.append(tau)
    base = MarkedFansyDivisor(curve, tailfan, slices, base_marks + lower_marks)
    h = SupportFunction(base, tailfan_cones, pieces)
    return base, h


def recover_divpoly(d: PolyhedralDivisor, curve=None) -> DivisorialPolytope:
    """Divisorial polytope from a proper graded polyhedral divisor: the box is
    the grading-one slice of the dual tail, the pieces are the grading-one
    evaluations."""
    proper = is_proper(d)
    if proper is NO:
        raise PreconditionError("recovery needs a proper polyhedral divisor")
    curve = curve or d.curve
    rank = d.ambient_rank - 1
    rows = []
    for r in d.tail.rays:
        rows.append((r[:-1], Fraction(-r[-1])))
    box = polyhedron_from_hrep(rows, rank)
    if is_empty(box) or box.rays:
        raise PreconditionError("the grading-one weight slice is not a nonempty polytope")
    pieces = {}
    for p, poly in d.coeffs:
        if is_empty(poly):
            raise PreconditionError("recovery needs a complete locus")
        pieces[p] = [(v[:-1], v[-1]) for v in poly.vertices]
    return DivisorialPolytope(curve, box, pieces)


# ---------------------------------------------------------------------------
# generator theory

def linearity_fan(d: PolyhedralDivisor) -> Fan:
    """Coarsest refinement of the dual tail cone on which every coefficient's
    support function (hence the evaluation map) is linear."""
    removed, complete = locus(d)
    if not complete:
        raise PreconditionError("the refinement is defined for complete loci")
    sv = dual_cone(d.tail)
    fans = []
    for _, poly in d.coeffs:
        cones = []
        for v in poly.vertices:
            rows = [(vec_sub(w, v), Fraction(0)) for w in poly.vertices if w != v]
            region = cone_from_hrep([r for r, _ in rows], [], d.ambient_rank)
            region = cone_intersect(region, sv)
            if region.dim() == sv.dim():
                cones.append(region)
        fans.append(Fan(cones, d.ambient_rank))
    from .geometry import common_refinement

    return common_refinement(fans, sv)


def constant_c(d: PolyhedralDivisor) -> int:
    """One less than the number of points with a non-lattice coefficient
    (floored at zero): the floor-degree defect bound."""
    count = 0
    for _, poly in d.coeffs:
        if is_empty(poly):
            continue
        if any(x.denominator != 1 for v in poly.vertices for x in v):
            count += 1
    return max(0, count - 1)


def alpha(d: PolyhedralDivisor, u, c: int, cap=None) -> int:
    """The smallest positive multiple of the weight whose evaluation is
    either integral and principal, or even with large integral half."""
    g = d.curve.genus
    threshold = 4 * g + 2 + 2 * c
    if cap is None:
        cap = 64 * (threshold + 1)
    ev = evaluate(d, u)
    for a in range(1, cap + 1):
        m = ev.scale(a)
        if m.is_integral() and is_principal(m) is YES:
            return a
        if a % 2 == 0 and divisor_degree(m) >= threshold and ev.scale(a // 2).is_integral():
            return a
    raise SearchCapExceeded(
        f"no multiple up to {cap} qualifies for weight {tuple(u)}; the cap is mis-sized"
    )


def _split_lineality(tau: Cone):
    """Write tau = tau' + <u>: a pointed part and a lineality generator."""
    if tau.is_pointed():
        return tau, None
    if len(tau.lineality) > 1:
        raise UnsupportedRank("refinement cones with lineality rank above one are unsupported")
    u = tau.lineality[0]
    ineqs, eqs = tau.hrep()
    pointed = cone_from_hrep(list(ineqs), list(eqs) + [u], tau.ambient_rank)
    return pointed, u


class GeneratorReport:
    """Bundle of everything the generator computation produces."""

    __slots__ = (
        "sigma_fan",
        "constant",
        "alphas",
        "g_tau",
        "g_all",
        "g_min",
        "generators",
        "normality",
    )

    def __init__(self, sigma_fan, constant, alphas, g_tau, g_all, g_min=None, generators=None, normality=UNKNOWN):
        self.sigma_fan = sigma_fan
        self.constant = constant
        self.alphas = alphas
        self.g_tau = g_tau
        self.g_all = g_all
        self.g_min = g_min
        self.generators = generators
        self.normality = normality


def generator_weights(d: PolyhedralDivisor, cap=None, max_grading=None) -> GeneratorReport:
    """Weights generating the section algebra, cone by cone over the
    linearity refinement of the dual tail.

    With max_grading set, only weights with last coordinate up to the bound
    are enumerated (the generating property for those weights is unaffected).
    """
    proper = is_proper(d)
    if proper is NO:
        raise PreconditionError("generator theory needs a proper polyhedral divisor")
    from .counting import hilbert_basis

    fan = linearity_fan(d)
    c = constant_c(d)
    alphas = {}
    g_tau = {}
    all_weights = set()
    for tau in fan.cones:
        pointed, u_tau = _split_lineality(tau)
        hb = hilbert_basis(pointed)
        gens = list(hb)
        extras = []
        if u_tau is not None:
            extras = [u_tau, vec_neg(u_tau)]
        for u in gens + extras:
            if u not in alphas:
                alphas[u] = alpha(d, u, c, cap=cap)
        sums = {tuple(0 for _ in range(d.ambient_rank))}
        for u in gens:
            au = alphas[u]
            new = set()
            for base_w in sums:
                for k in range(0, au + 1):
                    w = tuple(b + k * x for b, x in zip(base_w, u))
                    if max_grading is None or w[-1] <= max_grading:
                        new.add(w)
            sums = new
        tau_weights = set(sums)
        for u in extras:
            w = tuple(alphas[u] * x for x in u)
            if max_grading is None or w[-1] <= max_grading:
                tau_weights.add(w)
        g_tau[tau] = sorted(tau_weights)
        all_weights.update(tau_weights)
    return GeneratorReport(fan, c, alphas, g_tau, sorted(all_weights))


def _section_matrix_rank(rows, width):
    mat = [tuple(r) + (Fraction(0),) * (width - len(r)) for r in rows]
    return len(rref(mat)[0])


class _EchelonBasis:
    """Incremental row-echelon accumulator over the rationals."""

    def __init__(self, width):
        self.width = width
        self.rows = {}

    def insert(self, row):
        row = list(row) + [Fraction(0)] * (self.width - len(row))
        for j in range(self.width):
            if row[j] == 0:
                continue
            if j in self.rows:
                f = row[j]
                row = [x - f * y for x, y in zip(row, self.rows[j])]
            else:
                inv = row[j]
                self.rows[j] = [Fraction(x) / inv for x in row]
                return True
        return False

    def dim(self):
        return len(self.rows)


def minimal_weights(d: PolyhedralDivisor, cap=None, report: GeneratorReport | None = None):
    """The unique minimal set of weights generating the section algebra.

    Sieves the generating weights: a weight is dropped when products of
    sections at smaller generating weights already span its section space.
    Needs a full-dimensional tail and the projective line (exact sections).
    """
    if not d.tail.is_full_dimensional():
        raise PreconditionError("minimal weights need a full-dimensional tail cone")
    if not d.curve.is_line():
        raise PreconditionError("the exact sieve needs the projective line")
    if report is None:
        report = generator_weights(d, cap=cap)
    g_all = [w for w in report.g_all]
    zero = tuple(0 for _ in range(d.ambient_rank))
    dual = dual_cone(d.tail)
    floors = {w: floor_div(evaluate(d, w)) for w in g_all}
    bases = {w: section_basis(floors[w]) for w in g_all}

    def sieve_out(w) -> bool:
        target = floors[w]
        goal = h0(target)
        if goal == 0:
            return True
        ech = _EchelonBasis(int(divisor_degree(target)) + 1)
        for w1 in g_all:
            if w1 == zero or w1 == w:
                continue
            w2 = vec_sub(w, w1)
            if w2 == zero or not dual.contains(w2):
                continue
            d1 = floors[w1]
            d2 = floor_div(evaluate(d, w2))
            b1 = bases[w1]
            b2 = section_basis(d2)
            for f1 in b1.basis:
                for f2 in b2.basis:
                    ech.insert(product_in(target, d1, f1, d2, f2))
                    if ech.dim() == goal:
                        return True
        return ech.dim() == goal

    g_min = [w for w in g_all if w != zero and not sieve_out(w)]
    report.g_min = sorted(g_min)
    return report.g_min


def generators(d: PolyhedralDivisor, cap=None) -> GeneratorReport:
    """Full generator report: weights, minimal weights, explicit section
    generators per minimal weight, and projective normality of the grading."""
    report = generator_weights(d, cap=cap)
    minimal_weights(d, cap=cap, report=report)
    gens = {}
    for w in report.g_min:
        sb = section_basis(floor_div(evaluate(d, w)))
        gens[w] = sb
    report.generators = gens
    report.normality = (
        YES if all(w[-1] == 1 for w in report.g_min) else NO
    )
    return report


def projectively_normal(h: SupportFunction, cap=None) -> Verdict:
    """Whether the embedding by the linear system of h is projectively normal:
    all minimal generator weights of the affine cone sit in grading one."""
    d = cone_divisor(h)
    if not d.curve.is_line():
        return UNKNOWN
    report = generators(d, cap=cap)
    return report.normality
