"""Constant-direction flow: separatrices, maximal cylinders, decompositions.

Heights transverse to a direction ``d`` are measured with ``cross(d, z)``,
i.e. in units of ``|d|`` times the euclidean height.  Exact euclidean heights
are exposed as squares (and as rationals when ``|d|`` is rational).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import NamedTuple, Sequence

from .cones import Germ, germ_at_corner
from .exact import Q, Direction, Vec2, cross, dot, rel_diamond, same_ray
from .surface import EdgeRef, HalfTranslationSurface, SurfaceError
from .tracer import (
    SaddleConnection,
    SurfacePoint,
    Termination,
    Trajectory,
    shoot,
    shoot_germ,
    singularity_germs,
)


class InternalDecompositionError(SurfaceError):
    pass


class NotPeriodic(SurfaceError):
    pass


class PassesThroughSingularity(SurfaceError):
    pass


def _rational_sqrt(x: Fraction) -> Fraction | None:
    n, d = x.numerator, x.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


# ---------------------------------------------------------------------------
# separatrices


class OpenRay(NamedTuple):
    germ: Germ
    sq_length: Fraction
    status: str


@dataclass(frozen=True)
class SeparatrixDiagram:
    direction: Direction
    closed: tuple[SaddleConnection, ...]
    open_rays: tuple[OpenRay, ...]

    @property
    def complete(self) -> bool:
        return not self.open_rays

    def connections(self) -> list[SaddleConnection]:
        """Closed separatrices with each unoriented connection listed once."""
        seen = set()
        out = []
        for sc in self.closed:
            k = sc.unoriented_key()
            if k not in seen:
                seen.add(k)
                out.append(sc)
        return out


def separatrix_diagram(s: HalfTranslationSurface, d, max_sq_length) -> SeparatrixDiagram:
    """Trace every outgoing ray parallel to ``d`` at every singularity."""
    direction = Direction.of(d)
    budget = Q(max_sq_length)
    closed, rays = [], []
    for g in singularity_germs(s, direction.vec()):
        t = shoot_germ(s, g, budget)
        if t.termination is Termination.HIT_SINGULARITY:
            closed.append(SaddleConnection(g, t.end_germ, t.holonomy, t))
        else:
            status = "boundary" if t.termination is Termination.HIT_BOUNDARY else "undetermined"
            rays.append(OpenRay(g, t.sq_length, status))
    return SeparatrixDiagram(direction, tuple(closed), tuple(rays))


# ---------------------------------------------------------------------------
# maximal cylinders


def _clip(poly: list[Vec2], fn, bound, keep_le: bool) -> list[Vec2]:
    """Sutherland-Hodgman against the half-plane fn(z) <= bound (or >=)."""
    out = []
    n = len(poly)
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        fp, fq = fn(p) - bound, fn(q) - bound
        if not keep_le:
            fp, fq = -fp, -fq
        if fp <= 0:
            out.append(p)
        if (fp < 0 < fq) or (fq < 0 < fp):
            t = fp / (fp - fq)
            out.append(p + (q - p) * t)
    return out


def _area2(poly) -> Fraction:
    n = len(poly)
    return sum((cross(poly[i], poly[(i + 1) % n]) for i in range(n)), Fraction(0))


class _Band:
    """Developed strip 0 <= a <= L, -lo <= h <= hi around a closed leaf."""

    def __init__(self, z0: Vec2, d: Vec2, L: Fraction):
        self.z0, self.d, self.L = z0, d, L

    def a(self, z):
        return dot(z - self.z0, self.d)

    def h(self, z):
        return cross(self.d, z - self.z0)

    def clip(self, poly, lo, hi):
        for fn, bound, le in ((self.a, Fraction(0), False), (self.a, self.L, True),
                              (self.h, -lo, False), (self.h, hi, True)):
            poly = _clip(poly, fn, bound, le)
            if len(poly) < 3:
                return []
        return poly if _area2(poly) > 0 else []


@dataclass(frozen=True)
class _Copy:
    polygon: str
    sign: int
    offset: Vec2

    def dev(self, z) -> Vec2:
        return Vec2(self.sign * z[0] + self.offset.x, self.sign * z[1] + self.offset.y)

    def local(self, w) -> Vec2:
        return Vec2(self.sign * (w[0] - self.offset.x), self.sign * (w[1] - self.offset.y))


def _explore(conv, band: _Band, start: _Copy, lo, hi):
    """BFS over developed polygon copies meeting the band.

    Returns (copies with their clipped pieces, obstructions) where each
    obstruction is (h, kind, payload).
    """
    seen = {start}
    queue = [start]
    pieces = []
    obstacles = []
    while queue:
        cp = queue.pop()
        poly = conv.polygon(cp.polygon)
        dev = [cp.dev(v) for v in poly.vertices]
        piece = band.clip(dev, lo, hi)
        if not piece:
            continue
        pieces.append((cp, piece))
        n = len(poly)
        for j, V in enumerate(dev):
            a = band.a(V)
            if not (0 <= a <= band.L):
                continue
            hv = band.h(V)
            if not (-lo <= hv <= hi):
                continue
            cone = conv.cone_of(cp.polygon, j)
            if cone.is_singular or cone.on_boundary:
                obstacles.append((hv, "vertex", (cp, j, a)))
        for j in range(n):
            P0, P1 = dev[j], dev[(j + 1) % n]
            e = EdgeRef(cp.polygon, j)
            if not conv.is_glued(e):
                seg = _clip_segment(band, P0, P1)
                if seg is not None:
                    obstacles.append((None, "edge", (cp, j, seg)))
                continue
            tr = conv.transfer(e)
            nsg = cp.sign * tr.sign
            nxt = _Copy(tr.target.polygon, nsg, cp.offset - tr.offset * nsg)
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return pieces, obstacles


def _clip_segment(band: _Band, P0, P1):
    """Portion of segment P0P1 with 0 <= a <= L, as (h_min, h_max), or None."""
    a0, a1 = band.a(P0), band.a(P1)
    t_lo, t_hi = Fraction(0), Fraction(1)
    if a0 == a1:
        if not (0 <= a0 <= band.L):
            return None
    else:
        ta, tb = (0 - a0) / (a1 - a0), (band.L - a0) / (a1 - a0)
        t_lo, t_hi = max(t_lo, min(ta, tb)), min(t_hi, max(ta, tb))
        if t_lo >= t_hi:
            return None
    h0 = band.h(P0 + (P1 - P0) * t_lo)
    h1 = band.h(P0 + (P1 - P0) * t_hi)
    return min(h0, h1), max(h0, h1)


@dataclass(frozen=True)
class Cylinder:
    """Maximal flat cylinder; equality is by the region it occupies."""

    key: tuple
    direction: Direction
    circumference: Vec2 = field(compare=False)
    height_cross: Fraction = field(compare=False)
    area: Fraction = field(compare=False)
    core: Trajectory = field(compare=False, repr=False)
    boundary_bottom: tuple = field(compare=False, default=())
    boundary_top: tuple = field(compare=False, default=())
    boundary_edges: tuple = field(compare=False, default=())
    wraps: bool = field(compare=False, default=False)

    @property
    def circumference_sq(self) -> Fraction:
        return self.circumference.norm2()

    @property
    def height_sq(self) -> Fraction:
        return self.height_cross * self.height_cross / self.direction.vec().norm2()

    @property
    def height(self) -> Fraction | None:
        """Euclidean height when it is rational, else None (see height_sq)."""
        return _rational_sqrt(self.height_sq)

    def contains_strip(self, polygon: str, lo: Fraction, hi: Fraction) -> bool:
        for pid, ivs in self.key:
            if pid == polygon:
                return any(a <= lo and hi <= b for a, b in ivs)
        return False


def _merge(ivs):
    ivs = sorted(ivs)
    out = []
    for a, b in ivs:
        if out and a <= out[-1][1]:
            if b > out[-1][1]:
                out[-1] = (out[-1][0], b)
        else:
            out.append((a, b))
    return tuple(out)


def _region_key(conv, dc: Vec2, pieces):
    per: dict[str, list] = {}
    for cp, piece in pieces:
        hs = [cross(dc, cp.local(w)) for w in piece]
        per.setdefault(cp.polygon, []).append((min(hs), max(hs)))
    return tuple(sorted((pid, _merge(ivs)) for pid, ivs in per.items()))


def _boundary_germ(conv, pieces, cp: _Copy, j: int, d: Vec2, top: bool):
    """Germ along +d at a vertex of a boundary line, on the side facing the band."""
    V = cp.dev(conv.polygon(cp.polygon).vertex(j))
    cone = conv.cone_of(cp.polygon, j).index
    for cq, _piece in pieces:
        poly = conv.polygon(cq.polygon)
        for i, v in enumerate(poly.vertices):
            if cq.dev(v) != V or conv.cone_of(cq.polygon, i).index != cone:
                continue
            start = cq.dev(poly.vertex(i + 1)) - V
            end = cq.dev(poly.vertex(i - 1)) - V
            span, r = rel_diamond(start, end), rel_diamond(start, d)
            # the band lies clockwise of +d on the top line, counterclockwise on the bottom
            if (top and 0 < r <= span) or (not top and r < span):
                return germ_at_corner(conv, cq.polygon, i, d * cq.sign)
    return None


def _line_connections(conv, pieces, band: _Band, marks, top: bool):
    pts = {}
    for cp, j, a in marks:
        if not conv.cone_of(cp.polygon, j).is_singular:
            continue
        key = a % band.L if band.L else a
        pts.setdefault(key, (cp, j))
    out = []
    keys = sorted(pts)
    for idx, a in enumerate(keys):
        nxt = keys[(idx + 1) % len(keys)] + (band.L if idx + 1 == len(keys) else 0)
        cp, j = pts[a]
        g = _boundary_germ(conv, pieces, cp, j, band.d, top)
        if g is None:
            continue
        hol = band.d * ((nxt - a) / band.d.norm2())
        t = shoot_germ(conv, g, hol.norm2(), scale=_local_vec(conv, g, hol))
        if t.termination is Termination.HIT_SINGULARITY and t.param == 1:
            out.append(SaddleConnection(g, t.end_germ, t.holonomy, t))
    return tuple(out)


def _local_vec(conv, g: Germ, dev_vec: Vec2) -> Vec2:
    # germ directions are stored in the corner's own frame; match the ray
    v = g.vec()
    return dev_vec if same_ray(v, dev_vec) else -dev_vec


def maximal_cylinder(s: HalfTranslationSurface, periodic: Trajectory) -> Cylinder:
    """Widen the band around a closed regular leaf until it meets obstacles."""
    conv = s.convex
    if periodic.termination is Termination.HIT_SINGULARITY:
        raise PassesThroughSingularity("trajectory ends at a singularity")
    if periodic.termination is not Termination.CLOSED or periodic.flipped:
        raise NotPeriodic(f"trajectory is not closed ({periodic.termination.value})")
    first = periodic.segments[0]
    start = _Copy(first.polygon, first.sign, first.offset)
    d = periodic.direction  # already in the developed frame
    z0 = first.develop(first.start)
    L = periodic.param * d.norm2()
    band = _Band(z0, d, L)
    cap = conv.area() / periodic.param
    lo = hi = cap
    for _ in range(10_000):
        pieces, obstacles = _explore(conv, band, start, lo, hi)
        new_lo, new_hi = lo, hi
        for hv, kind, payload in obstacles:
            spans = [(hv, hv)] if kind == "vertex" else [payload[2]]
            for a, b in spans:
                if a <= 0 <= b:
                    raise PassesThroughSingularity("closed leaf meets a singularity or boundary")
                if a > 0:
                    new_hi = min(new_hi, a)
                else:
                    new_lo = min(new_lo, -b)
        if (new_lo, new_hi) == (lo, hi):
            break
        lo, hi = new_lo, new_hi
    else:
        raise InternalDecompositionError("cylinder widening did not converge")
    wraps = lo == cap and hi == cap
    total = cap if wraps else min(lo + hi, cap)
    if wraps:
        lo = hi = cap / 2
        pieces, obstacles = _explore(conv, band, start, lo, hi)
    dc = Direction.of(d).vec()
    key = _region_key(conv, dc, pieces)
    top = [p for hv, kind, p in obstacles if kind == "vertex" and hv == hi]
    bottom = [p for hv, kind, p in obstacles if kind == "vertex" and hv == -lo]
    edges = tuple(sorted({(p[0].polygon, p[1]) for hv, kind, p in obstacles if kind == "edge"}))
    core = _mid_leaf(conv, band, pieces, lo, hi, d)
    return Cylinder(
        key=key,
        direction=Direction.of(d),
        circumference=periodic.holonomy,
        height_cross=total,
        area=periodic.param * total,
        core=core,
        boundary_bottom=() if wraps else _line_connections(conv, pieces, band, bottom, False),
        boundary_top=() if wraps else _line_connections(conv, pieces, band, top, True),
        boundary_edges=tuple(EdgeRef(*e) for e in edges),
        wraps=wraps,
    )


def _mid_leaf(conv, band: _Band, pieces, lo, hi, d) -> Trajectory:
    hm = (hi - lo) / 2
    n = Vec2(-d.y, d.x)
    target_a = band.L / 2
    p = band.z0 + d * (target_a / d.norm2()) + n * (hm / d.norm2())
    for cp, _piece in pieces:
        poly = conv.polygon(cp.polygon)
        z = cp.local(p)
        if poly.contains(z):
            return shoot(conv, SurfacePoint(cp.polygon, z), d * cp.sign, band.L * band.L / d.norm2())
    raise InternalDecompositionError("core leaf outside the developed band")


# ---------------------------------------------------------------------------
# decompositions


class Outcome(enum.Enum):
    PERIODIC = "periodic"
    MIXED = "mixed"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class CandidateDomain:
    """Union of flow strips whose leaves did not close within the budget."""

    strips: tuple[tuple[str, Fraction, Fraction], ...]
    boundary: tuple[SaddleConnection, ...]


@dataclass(frozen=True)
class DirectionClassification:
    direction: Direction
    outcome: Outcome
    cylinders: tuple[Cylinder, ...] = ()
    candidate_domains: tuple[CandidateDomain, ...] = ()
    separatrices: SeparatrixDiagram | None = None
    budget: Fraction = Fraction(0)

    @property
    def total_area(self) -> Fraction:
        return sum((c.area for c in self.cylinders), Fraction(0))


def _strips(conv, dc: Vec2, critical: dict[str, set]):
    for poly in conv.polygons:
        hs = {cross(dc, v) for v in poly.vertices}
        lo, hi = min(hs), max(hs)
        hs |= {h for h in critical.get(poly.id, ()) if lo <= h <= hi}
        levels = sorted(hs)
        for a, b in zip(levels, levels[1:]):
            yield poly, a, b


def _chord_mid(poly, dc: Vec2, h: Fraction) -> Vec2:
    pts = []
    for i in range(len(poly)):
        p, q = poly.edge(i)
        hp, hq = cross(dc, p), cross(dc, q)
        if hp == hq:
            continue
        if min(hp, hq) <= h <= max(hp, hq):
            pts.append(p + (q - p) * ((h - hp) / (hq - hp)))
    pts.sort()
    return (pts[0] + pts[-1]) / 2


def cylinder_decomposition(s: HalfTranslationSurface, d, max_sq_length) -> DirectionClassification:
    """Split the surface into maximal cylinders in direction ``d`` if possible."""
    conv = s.convex
    direction = Direction.of(d)
    dc = direction.vec()
    budget = Q(max_sq_length)
    diagram = separatrix_diagram(conv, direction.vec(), budget)
    critical: dict[str, set] = {}
    for sc in diagram.closed:
        for seg in sc.segments:
            critical.setdefault(seg.polygon, set()).add(cross(dc, seg.start))
    cylinders: list[Cylinder] = []
    leftovers = []
    for poly, a, b in _strips(conv, dc, critical):
        if any(c.contains_strip(poly.id, a, b) for c in cylinders):
            continue
        mid = _chord_mid(poly, dc, (a + b) / 2)
        leaf = shoot(conv, SurfacePoint(poly.id, mid), dc, budget)
        if leaf.termination is Termination.CLOSED and not leaf.flipped:
            cyl = maximal_cylinder(conv, leaf)
            if not cyl.contains_strip(poly.id, a, b):
                raise InternalDecompositionError("cylinder misses the strip it was grown from")
            cylinders.append(cyl)
        else:
            leftovers.append((poly.id, a, b, leaf))
    cylinders.sort(key=lambda c: (c.area, c.key))
    area = conv.area()
    covered = sum((c.area for c in cylinders), Fraction(0))
    if not leftovers:
        if covered != area:
            raise InternalDecompositionError(
                f"cylinder areas sum to {covered}, surface area is {area}")
        return DirectionClassification(direction, Outcome.PERIODIC, tuple(cylinders), (),
                                       diagram, budget)
    if diagram.complete and any(leaf.termination is Termination.HIT_SINGULARITY
                                for *_, leaf in leftovers):
        raise InternalDecompositionError("a regular strip reaches a singularity although "
                                         "every separatrix closed")
    domains = _group_domains(conv, dc, leftovers, diagram)
    outcome = Outcome.MIXED if (cylinders or diagram.closed) else Outcome.UNDETERMINED
    return DirectionClassification(direction, outcome, tuple(cylinders), domains, diagram, budget)


def _group_domains(conv, dc, leftovers, diagram) -> tuple[CandidateDomain, ...]:
    parent = list(range(len(leftovers)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, (pid, a, b, leaf) in enumerate(leftovers):
        for seg in leaf.segments:
            h = cross(dc, seg.start)
            for j, (pj, aj, bj, _) in enumerate(leftovers):
                if pj == seg.polygon and aj < h < bj:
                    parent[find(i)] = find(j)
    groups: dict[int, list] = {}
    for i, item in enumerate(leftovers):
        groups.setdefault(find(i), []).append(item)
    out = []
    for items in groups.values():
        strips = tuple(sorted((pid, a, b) for pid, a, b, _ in items))
        levels = {(pid, h) for pid, a, b in strips for h in (a, b)}
        bdry = []
        for sc in diagram.connections():
            if any((seg.polygon, cross(dc, seg.start)) in levels for seg in sc.segments):
                bdry.append(sc)
        out.append(CandidateDomain(strips, tuple(bdry)))
    out.sort(key=lambda c: c.strips)
    return tuple(out)


def constant_direction_tail(s: HalfTranslationSurface, path) -> Direction | None:
    """Direction of the part of ``path`` after its last cone transition.

    ``path`` is a Trajectory or a sequence of legs (saddle connections or
    trajectories) joined at cone points.
    """
    if isinstance(path, (Trajectory, SaddleConnection)):
        legs: Sequence = [path]
    else:
        legs = list(path)
    if not legs:
        return None
    last = legs[-1]
    segs = last.segments
    if not segs:
        return None
    return Direction.of(segs[-1].holonomy)


def periodic_cores(decomp: DirectionClassification) -> list[Trajectory]:
    return [c.core for c in decomp.cylinders]
