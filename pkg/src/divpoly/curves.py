"""Base curves, rational divisors on them, and explicit section spaces.

The projective line is fully computable: principality is a degree test,
section spaces come with explicit bases of rational functions, and products of
sections reduce to polynomial multiplication.  Abstract curves carry a genus
only; questions whose answer would need Jacobian arithmetic come back as
UNKNOWN rather than a guess.
"""

from __future__ import annotations

from fractions import Fraction
from math import floor

from .errors import PreconditionError
from .linalg import rref


class Verdict:
    """Three-valued answer: YES / NO / UNKNOWN."""

    __slots__ = ("name",)
    _cache = {}

    def __new__(cls, name):
        if name not in cls._cache:
            obj = super().__new__(cls)
            obj.name = name
            cls._cache[name] = obj
        return cls._cache[name]

    def __repr__(self):
        return self.name

    def __bool__(self):
        return self is YES

    def both(self, other):
        """Conjunction: NO dominates, then UNKNOWN, then YES."""
        if NO in (self, other):
            return NO
        if UNKNOWN in (self, other):
            return UNKNOWN
        return YES


YES = Verdict("YES")
NO = Verdict("NO")
UNKNOWN = Verdict("UNKNOWN")


class AtInfinity:
    """Coordinate marker for the point at infinity on the projective line."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"


INF = AtInfinity()


class PointId:
    """A named point of the base curve (with a coordinate on the line)."""

    __slots__ = ("label", "coord")

    def __init__(self, label, coord=None):
        self.label = str(label)
        if coord is None or coord is INF:
            self.coord = coord
        else:
            self.coord = Fraction(coord)

    def __eq__(self, other):
        return isinstance(other, PointId) and self.label == other.label and self.coord == other.coord

    def __hash__(self):
        return hash((self.label, "inf" if self.coord is INF else self.coord))

    def __repr__(self):
        return f"PointId({self.label!r})"

    def is_infinity(self):
        return self.coord is INF


class Curve:
    """ProjectiveLine (kind 'P1', genus 0) or Abstract (genus only)."""

    __slots__ = ("kind", "genus", "points")

    def __init__(self, kind, genus, points):
        if kind not in ("P1", "abstract"):
            raise ValueError(f"unknown curve kind {kind!r}")
        if kind == "P1" and genus != 0:
            raise ValueError("the projective line has genus 0")
        points = tuple(points)
        labels = [p.label for p in points]
        if len(set(labels)) != len(labels):
            raise ValueError("point labels must be unique")
        if kind == "P1":
            coords = [("inf" if p.coord is INF else p.coord) for p in points]
            if any(p.coord is None for p in points):
                raise ValueError("points on the line need coordinates")
            if len(set(coords)) != len(coords):
                raise ValueError("point coordinates must be pairwise distinct")
        else:
            if any(p.coord is not None for p in points):
                raise ValueError("abstract curve points carry no coordinates")
        self.kind = kind
        self.genus = int(genus)
        self.points = points

    def __eq__(self, other):
        return (
            isinstance(other, Curve)
            and self.kind == other.kind
            and self.genus == other.genus
            and self.points == other.points
        )

    def __hash__(self):
        return hash((self.kind, self.genus, self.points))

    def __repr__(self):
        return f"Curve({self.kind}, genus={self.genus}, points={[p.label for p in self.points]})"

    def is_line(self):
        return self.kind == "P1"

    def point(self, label) -> PointId:
        for p in self.points:
            if p.label == label:
                return p
        raise KeyError(f"no point labelled {label!r} on this curve")

    def with_genus(self, genus) -> "Curve":
        if genus == self.genus:
            return self
        points = self.points
        if self.kind == "P1" and genus != 0:
            points = tuple(PointId(p.label) for p in self.points)
            return Curve("abstract", genus, points)
        return Curve(self.kind, genus, points)


def projective_line(*coords) -> Curve:
    """The projective line with named points; "inf" means the infinite point."""
    pts = []
    for c in coords:
        if c == "inf" or c is INF:
            pts.append(PointId("inf", INF))
        else:
            pts.append(PointId(str(c), Fraction(c)))
    return Curve("P1", 0, pts)


class QDivisor:
    """Finitely supported rational divisor on a curve; zeros are not stored."""

    __slots__ = ("curve", "coeffs")

    def __init__(self, curve, coeffs):
        self.curve = curve
        items = []
        if isinstance(coeffs, dict):
            coeffs = coeffs.items()
        for p, c in coeffs:
            c = Fraction(c)
            if c != 0:
                items.append((p, c))
        items.sort(key=lambda pc: pc[0].label)
        self.coeffs = tuple(items)

    def __eq__(self, other):
        return isinstance(other, QDivisor) and self.curve == other.curve and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.curve, self.coeffs))

    def __repr__(self):
        if not self.coeffs:
            return "QDivisor(0)"
        return "QDivisor(" + " + ".join(f"{c}*[{p.label}]" for p, c in self.coeffs) + ")"

    def coefficient(self, p) -> Fraction:
        for q, c in self.coeffs:
            if q == p:
                return c
        return Fraction(0)

    def support(self):
        return [p for p, _ in self.coeffs]

    def __add__(self, other):
        if self.curve != other.curve:
            raise PreconditionError("divisors live on different curves")
        acc = {p: c for p, c in self.coeffs}
        for p, c in other.coeffs:
            acc[p] = acc.get(p, Fraction(0)) + c
        return QDivisor(self.curve, acc)

    def __neg__(self):
        return QDivisor(self.curve, [(p, -c) for p, c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k):
        return QDivisor(self.curve, [(p, Fraction(k) * c) for p, c in self.coeffs])

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for _, c in self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs


def zero_divisor(curve) -> QDivisor:
    return QDivisor(curve, [])


def floor_div(d: QDivisor) -> QDivisor:
    """Coefficientwise floor."""
    return QDivisor(d.curve, [(p, Fraction(floor(c))) for p, c in d.coeffs])


def degree(d: QDivisor) -> Fraction:
    return sum((c for _, c in d.coeffs), Fraction(0))


def is_principal(d: QDivisor) -> Verdict:
    """Principality of d itself (not of a multiple).

    Non-integral or nonzero-degree divisors are never principal.  On the line
    degree zero suffices; on a positive-genus abstract curve the answer would
    need the Jacobian, so it is UNKNOWN.
    """
    if d.is_zero():
        return YES
    if not d.is_integral():
        return NO
    if degree(d) != 0:
        return NO
    if d.curve.genus == 0:
        return YES
    return UNKNOWN


def has_principal_multiple(d: QDivisor) -> Verdict:
    """Whether some positive integer multiple of d is principal."""
    if d.is_zero():
        return YES
    if degree(d) != 0:
        return NO
    if d.curve.genus == 0:
        return YES
    return UNKNOWN


def h0(d: QDivisor):
    """Dimension of the space of sections of the floor of d.

    Exact on the line and in the Riemann-Roch range; otherwise the interval
    (lower, upper), both clipped at 0.
    """
    n = degree(floor_div(d))
    g = d.curve.genus
    if g == 0:
        return max(0, int(n) + 1)
    if n >= 2 * g - 1:
        return int(n) + 1 - g
    return (max(0, int(n) + 1 - g), max(0, int(n) + 1))


class SectionSpace:
    """Explicit basis of the sections of an integral divisor on the line.

    A section f of L(D) is stored through the polynomial g = f * prod (z-p)^{a_p}
    over the finite points p in the support of D; the space is then exactly the
    polynomials of degree <= deg D.  The `basis` holds coefficient tuples of
    those polynomials (ascending), one per basis element.
    """

    __slots__ = ("divisor", "basis")

    def __init__(self, divisor, basis):
        self.divisor = divisor
        self.basis = tuple(tuple(Fraction(c) for c in b) for b in basis)

    def dim(self):
        return len(self.basis)

    def function_strings(self):
        """Human-readable rational functions, one per basis element."""
        den_parts = []
        num_parts_common = []
        for p, c in self.divisor.coeffs:
            if p.is_infinity() or c == 0:
                continue
            factor = f"(z - {p.coord})" if p.coord != 0 else "z"
            e = int(c)
            if e > 0:
                den_parts.append(factor if e == 1 else f"{factor}^{e}")
            else:
                num_parts_common.append(factor if e == -1 else f"{factor}^{-e}")
        out = []
        for b in self.basis:
            num = _poly_str(b)
            parts = ([num] if num != "1" else []) + num_parts_common
            if not parts:
                parts = ["1"]
            s = "*".join(parts)
            if den_parts:
                s = f"({s})/({'*'.join(den_parts)})"
            out.append(s)
        return out


def _poly_str(coeffs):
    terms = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        if i == 0:
            terms.append(str(c))
        elif i == 1:
            terms.append("z" if c == 1 else f"{c}*z")
        else:
            terms.append(f"z^{i}" if c == 1 else f"{c}*z^{i}")
    return " + ".join(terms) if terms else "0"


def section_basis(d: QDivisor) -> SectionSpace:
    """Basis of H0 of the floor of d on the projective line.

    In the fixed-denominator model the basis is simply the monomials z^j for
    0 <= j <= deg(floor d); the denominator bookkeeping lives in the divisor.
    """
    if not d.curve.is_line():
        raise PreconditionError("explicit section bases need the projective line")
    fd = floor_div(d)
    n = int(degree(fd))
    if n < 0:
        return SectionSpace(fd, [])
    basis = [tuple(Fraction(1) if i == j else Fraction(0) for i in range(j + 1)) for j in range(n + 1)]
    return SectionSpace(fd, basis)


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return tuple(out)


def _linear_factor_power(root, e):
    """(z - root)^e as a coefficient tuple."""
    out = (Fraction(1),)
    for _ in range(e):
        out = _poly_mul(out, (-Fraction(root), Fraction(1)))
    return out


def product_in(target: QDivisor, d1: QDivisor, f1, d2: QDivisor, f2):
    """Coefficients of the product of sections f1 in L(d1), f2 in L(d2),
    written in the fixed-denominator coordinates of L(target).

    All three divisors must be integral with d1 + d2 <= target coefficientwise.
    """
    prod = _poly_mul(f1, f2)
    finite = {
        p
        for p in target.support() + d1.support() + d2.support()
        if not p.is_infinity()
    }
    for p in finite:
        e = int(target.coefficient(p) - d1.coefficient(p) - d2.coefficient(p))
        if e < 0:
            raise PreconditionError("product does not land in the target section space")
        if e:
            prod = _poly_mul(prod, _linear_factor_power(p.coord, e))
    return prod


def span_dimension(rows) -> int:
    """Rank of a list of coefficient tuples (ragged lengths allowed)."""
    if not rows:
        return 0
    n = max(len(r) for r in rows)
    padded = [tuple(r) + (Fraction(0),) * (n - len(r)) for r in rows]
    return len(rref(padded)[0])


def products_surjective(d1: QDivisor, d2: QDivisor) -> Verdict:
    """Does multiplication H0(floor d1) x H0(floor d2) -> H0(floor d1 + floor d2)
    hit everything?

    Exact on the line by an explicit span computation; on abstract curves the
    sufficient conditions (first factor principal, or degrees >= 2g+1 and
    >= 2g) give YES, everything else is UNKNOWN.
    """
    if d1.curve != d2.curve:
        raise PreconditionError("divisors live on different curves")
    curve = d1.curve
    fd1, fd2 = floor_div(d1), floor_div(d2)
    if curve.is_line():
        target = fd1 + fd2
        n = int(degree(target))
        goal = max(0, n + 1)
        if goal == 0:
            return YES
        s1, s2 = section_basis(fd1), section_basis(fd2)
        rows = [
            product_in(target, fd1, f1, fd2, f2)
            for f1 in s1.basis
            for f2 in s2.basis
        ]
        return YES if span_dimension(rows) == goal else NO
    g = curve.genus
    if is_principal(fd1) is YES or is_principal(fd2) is YES:
        return YES
    if degree(fd1) >= 2 * g + 1 and degree(fd2) >= 2 * g:
        return YES
    if degree(fd2) >= 2 * g + 1 and degree(fd1) >= 2 * g:
        return YES
    return UNKNOWN
