"""SVG pictures of developed paths and cylinder decompositions.

Coordinates are printed with 12 decimals; this rounding is for display only.
"""

from __future__ import annotations

from fractions import Fraction

from .exact import Vec2, cross
from .flow import DirectionClassification, _clip
from .surface import HalfTranslationSurface
from .tracer import Trajectory

PALETTE = ("#8ecae6", "#ffb703", "#90be6d", "#f28482", "#b8b8ff", "#f6bd60")
SCALE = 100


def fmt(x) -> str:
    """Fixed 12-decimal rendering, locale independent."""
    q = round(Fraction(x) * 10**12)
    sign = "-" if q < 0 else ""
    q = abs(q)
    return f"{sign}{q // 10**12}.{q % 10**12:012d}"


def _doc(body: list[str], box) -> str:
    (x0, y0), (x1, y1) = box
    pad = Fraction(1, 10)
    x0, y0, x1, y1 = x0 - pad, y0 - pad, x1 + pad, y1 + pad
    w, h = (x1 - x0) * SCALE, (y1 - y0) * SCALE
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{fmt(w)}" height="{fmt(h)}" '
            f'viewBox="{fmt(x0 * SCALE)} {fmt(-y1 * SCALE)} {fmt(w)} {fmt(h)}">')
    return "\n".join([head, *body, "</svg>"]) + "\n"


def _pt(v) -> str:
    return f"{fmt(v[0] * SCALE)},{fmt(-v[1] * SCALE)}"


def _axes(box) -> list[str]:
    (x0, y0), (x1, y1) = box
    return [
        f'<line class="axis" x1="{fmt(x0 * SCALE)}" y1="0.000000000000" x2="{fmt(x1 * SCALE)}" '
        f'y2="0.000000000000" stroke="#999" stroke-width="0.5"/>',
        f'<line class="axis" x1="0.000000000000" y1="{fmt(-y0 * SCALE)}" x2="0.000000000000" '
        f'y2="{fmt(-y1 * SCALE)}" stroke="#999" stroke-width="0.5"/>',
    ]


def _bbox(points) -> tuple:
    pts = list(points) or [Vec2(Fraction(0), Fraction(0)), Vec2(Fraction(1), Fraction(1))]
    xs = [p[0] for p in pts] + [Fraction(0)]
    ys = [p[1] for p in pts] + [Fraction(0)]
    return (min(xs), min(ys)), (max(xs), max(ys))


def render_trajectory(s: HalfTranslationSurface, t: Trajectory | None) -> str:
    """Developed path with the outline of every polygon copy it crosses."""
    conv = s.convex
    body, pts = [], []
    if t is not None:
        for seg in t.segments:
            poly = conv.polygon(seg.polygon)
            dev = [seg.develop(v) for v in poly.vertices]
            pts += dev
            body.append(f'<polygon class="tile" points="{" ".join(_pt(v) for v in dev)}" '
                        f'fill="none" stroke="#444" stroke-width="0.5"/>')
        for seg in t.segments:
            a, b = seg.develop(seg.start), seg.develop(seg.end)
            body.append(f'<line class="path" x1="{fmt(a.x * SCALE)}" y1="{fmt(-a.y * SCALE)}" '
                        f'x2="{fmt(b.x * SCALE)}" y2="{fmt(-b.y * SCALE)}" '
                        f'stroke="#d00" stroke-width="1.5"/>')
    box = _bbox(pts)
    return _doc(_axes(box) + body, box)


def render_decomposition(s: HalfTranslationSurface, dec: DirectionClassification) -> str:
    """Polygons in their own coordinates, each cylinder shaded as a band."""
    conv = s.convex
    dc = dec.direction.vec()
    body, pts = [], []
    for ci, cyl in enumerate(dec.cylinders):
        color = PALETTE[ci % len(PALETTE)]
        for pid, ivs in cyl.key:
            poly = list(conv.polygon(pid).vertices)
            for lo, hi in ivs:
                band = _clip(poly, lambda z: cross(dc, z), lo, False)
                band = _clip(band, lambda z: cross(dc, z), hi, True)
                if len(band) < 3:
                    continue
                body.append(f'<polygon class="cylinder" data-cylinder="{ci}" '
                            f'points="{" ".join(_pt(v) for v in band)}" fill="{color}" '
                            f'fill-opacity="0.7" stroke="none"/>')
    for poly in conv.polygons:
        pts += poly.vertices
        body.append(f'<polygon class="tile" points="{" ".join(_pt(v) for v in poly.vertices)}" '
                    f'fill="none" stroke="#222" stroke-width="0.5"/>')
    box = _bbox(pts)
    return _doc(_axes(box) + body, box)
