"""Deterministic SVG rendering of rank-one data.

Two picture kinds: slice strips of a marked fansy divisor (number lines with
cell vertices and mark annotations) and graphs of rank-one piecewise affine
data (divisorial polytope pieces, support function pieces) on a lattice grid.
Output is byte-deterministic: fixed viewport, sorted elements, exact rational
coordinates formatted to a fixed number of decimals.
"""

from __future__ import annotations

from fractions import Fraction

from .divisorial import DivisorialPolytope, graph_vertices
from .errors import UnsupportedRank
from .fansy import MarkedFansyDivisor
from .support import SupportFunction

WIDTH = 640
PANEL = 150
MARGIN = 48


def _fmt(x) -> str:
    q = Fraction(x).limit_denominator(10**6)
    scaled = round(q * 100)
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    return f"{sign}{scaled // 100}.{scaled % 100:02d}"


class _Doc:
    def __init__(self, width, height):
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}">',
            f'<rect width="{width}" height="{height}" fill="white"/>',
        ]

    def line(self, x1, y1, x2, y2, color="black", width="1"):
        self.parts.append(
            f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
            f'stroke="{color}" stroke-width="{width}"/>'
        )

    def circle(self, x, y, r, color="black"):
        self.parts.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{r}" fill="{color}"/>')

    def text(self, x, y, s, size=12, color="black"):
        self.parts.append(
            f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-size="{size}" '
            f'font-family="monospace" fill="{color}">{s}</text>'
        )

    def finish(self) -> str:
        return "\n".join(self.parts + ["</svg>"]) + "\n"


def _check_rank(rank):
    if rank != 1:
        raise UnsupportedRank("rendering is implemented for rank one only")


def _xmap(lo, hi):
    span = hi - lo
    if span == 0:
        span = Fraction(1)

    def to_px(x):
        return MARGIN + (Fraction(x) - lo) * (WIDTH - 2 * MARGIN) / span

    return to_px


def render_fansy(x: MarkedFansyDivisor) -> str:
    """Slice strips with vertices and mark annotations."""
    _check_rank(x.ambient_rank)
    rows = list(x.slices)
    height = PANEL * max(1, len(rows)) + 40
    doc = _Doc(WIDTH, height)
    verts = [Fraction(v[0]) for _, cx in rows for v in cx.vertices()] or [Fraction(0)]
    lo, hi = min(verts) - 1, max(verts) + 1
    to_px = _xmap(lo, hi)
    for i, (p, cx) in enumerate(rows):
        ybase = PANEL * i + PANEL // 2
        doc.text(MARGIN, ybase - 40, f"slice at {p.label}")
        doc.line(MARGIN - 20, ybase, WIDTH - MARGIN + 20, ybase, color="gray")
        for v in cx.vertices():
            px = to_px(v[0])
            doc.line(px, ybase - 8, px, ybase + 8)
            doc.text(px - 8, ybase + 24, str(v[0]))
        for cell in cx.cells:
            for r in cell.rays:
                anchor = to_px(cell.vertices[0][0])
                tip = anchor + 24 * r[0]
                doc.line(anchor, ybase - 4, tip, ybase - 4, color="steelblue", width="2")
    marks = ", ".join(_cone_label(c) for c in x.marks) or "none"
    doc.text(MARGIN, height - 16, f"marks: {marks}")
    return doc.finish()


def _cone_label(c) -> str:
    if c.lineality:
        return "line"
    if not c.rays:
        return "origin"
    return " and ".join(("x>=0" if r[0] > 0 else "x<=0") for r in c.rays)


def _render_graphs(rows, title) -> str:
    """rows: list of (label, [(x, y) sorted breakpoint pairs])."""
    height = PANEL * max(1, len(rows)) + 40
    doc = _Doc(WIDTH, height)
    xs = [x for _, pts in rows for x, _ in pts] or [Fraction(0)]
    ys = [y for _, pts in rows for _, y in pts] or [Fraction(0)]
    lo, hi = min(xs) - 1, max(xs) + 1
    to_px = _xmap(lo, hi)
    for i, (label, pts) in enumerate(rows):
        ytop = PANEL * i + 24
        ybot = PANEL * i + PANEL - 16
        ylo, yhi = min(ys) - 1, max(ys) + 1
        yspan = yhi - ylo if yhi != ylo else Fraction(1)

        def to_py(y):
            return ybot - (Fraction(y) - ylo) * (ybot - ytop) / yspan

        doc.text(MARGIN, ytop - 6, f"{title} at {label}")
        # lattice grid
        gx = int(lo)
        while gx <= hi:
            gy = int(ylo)
            while gy <= yhi:
                doc.circle(to_px(gx), to_py(gy), 1, color="lightgray")
                gy += 1
            gx += 1
        for (x1, y1), (x2, y2) in zip(pts, pts[1:]):
            doc.line(to_px(x1), to_py(y1), to_px(x2), to_py(y2), color="black", width="2")
        for x1, y1 in pts:
            doc.circle(to_px(x1), to_py(y1), 2.5, color="black")
    return doc.finish()


def render_divisorial_polytope(psi: DivisorialPolytope) -> str:
    _check_rank(psi.rank)
    rows = []
    for p, _ in psi.pieces:
        pts = sorted((Fraction(u[0]), val) for u, val in graph_vertices(psi, p))
        rows.append((p.label, pts))
    return _render_graphs(rows, "coefficient")


def render_support_function(h: SupportFunction) -> str:
    _check_rank(h.base.ambient_rank)
    rows = []
    for p, data in h.pieces:
        xs = sorted({Fraction(v[0]) for cell, _, _ in data for v in cell.vertices})
        if not xs:
            xs = [Fraction(0)]
        span_lo, span_hi = xs[0] - 2, xs[-1] + 2
        sample = sorted({span_lo, span_hi, *xs})
        pts = [(x, h.value(p, (x,))) for x in sample]
        rows.append((p.label, pts))
    return _render_graphs(rows, "support function")
