"""Exact straight-line flow on a half-translation surface.

All tracing happens on the convex model of a surface (``surface.convex``);
points and germs refer to its polygons.  For surfaces given with convex
polygons this is the surface itself.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .cones import (
    Germ,
    germ_at_corner,
    germ_in_sector,
    is_legal_transition,
    make_germ,
    position,
    rotate,
)
from .exact import Q, ZERO, Vec2, cross, dot, in_closed_arc, point_on_segment, rel_diamond, same_ray
from .surface import (
    EdgeRef,
    HalfTranslationSurface,
    PointOutsideSurface,
    SurfaceError,
    compute_singularities,
)


class MalformedPath(SurfaceError):
    pass


class NotASingularity(SurfaceError):
    pass


class Termination(enum.Enum):
    HIT_SINGULARITY = "hit-singularity"
    CLOSED = "closed"
    LENGTH_BUDGET = "length-budget"
    HIT_BOUNDARY = "hit-boundary"
    HIT_VERTEX = "hit-vertex"  # only with stop_at_vertices=True


class Policy(enum.Enum):
    ENUMERATE = "enumerate"
    RIGHT_TIGHT = "right-tight"
    LEFT_TIGHT = "left-tight"


@dataclass(frozen=True)
class SurfacePoint:
    polygon: str
    coords: Vec2

    def __post_init__(self):
        object.__setattr__(self, "coords", Vec2.of(*self.coords))


@dataclass(frozen=True)
class Segment:
    """Straight piece inside one polygon; developed = sign * local + offset."""

    polygon: str
    start: Vec2
    end: Vec2
    sign: int
    offset: Vec2

    @property
    def holonomy(self) -> Vec2:
        return self.end - self.start

    def develop(self, z) -> Vec2:
        return Vec2(self.sign * z[0] + self.offset.x, self.sign * z[1] + self.offset.y)


class Passage(NamedTuple):
    """Transparent crossing of a regular vertex class after ``segment``."""

    cone: int
    incoming: Germ
    outgoing: Germ
    segment: int


@dataclass(frozen=True)
class Trajectory:
    start: SurfacePoint
    direction: Vec2
    segments: tuple[Segment, ...]
    termination: Termination
    param: Fraction
    start_germ: Germ | None = None
    end_germ: Germ | None = None
    flipped: bool = False
    crossings: tuple[EdgeRef, ...] = ()
    passages: tuple[Passage, ...] = ()

    @property
    def sq_length(self) -> Fraction:
        return self.param * self.param * self.direction.norm2()

    @property
    def holonomy(self) -> Vec2:
        """Developed displacement, in the frame of the starting polygon."""
        return self.direction * self.param

    @property
    def end_point(self) -> SurfacePoint | None:
        if not self.segments:
            return None
        last = self.segments[-1]
        return SurfacePoint(last.polygon, last.end)

    def developed_end(self) -> Vec2:
        if not self.segments:
            return self.start.coords
        last = self.segments[-1]
        return last.develop(last.end)

    def itinerary(self) -> tuple[str, ...]:
        return tuple(f"{e.polygon}:{e.index}" for e in self.crossings)


# ---------------------------------------------------------------------------
# point handling


def _on_edge(poly, p):
    for i in range(len(poly)):
        a, b = poly.edge(i)
        if point_on_segment(p, a, b):
            return i
    return None


def _vertex_index(poly, p):
    for i, v in enumerate(poly.vertices):
        if v == p:
            return i
    return None


def locate(s: HalfTranslationSurface, point: SurfacePoint) -> SurfacePoint:
    """Express ``point`` on the convex model of ``s`` (raises if outside)."""
    conv = s.convex
    p = point.coords
    candidates = [point.polygon] if point.polygon in conv._by_id else s.piece_of.get(point.polygon, [])
    for pid in candidates:
        if conv.polygon(pid).contains(p):
            return SurfacePoint(pid, p)
    raise PointOutsideSurface(f"point {p.as_strings()} not in polygon {point.polygon!r}")


def representations(s: HalfTranslationSurface, point: SurfacePoint) -> list[SurfacePoint]:
    """All (polygon, coords) descriptions of the same surface point."""
    poly = s.polygon(point.polygon)
    vi = _vertex_index(poly, point.coords)
    if vi is not None:
        cone = s.cone_of(point.polygon, vi)
        return [SurfacePoint(c.polygon, s.polygon(c.polygon).vertex(c.vertex)) for c in cone.corners]
    out = [point]
    ei = _on_edge(poly, point.coords)
    if ei is not None:
        tr = s.transfer(EdgeRef(point.polygon, ei))
        if tr is not None:
            out.append(SurfacePoint(tr.target.polygon, tr.apply(point.coords)))
    return out


def canonical_point(s: HalfTranslationSurface, point: SurfacePoint):
    """Hashable identity of a surface point (``s`` must be the convex model)."""
    poly = s.polygon(point.polygon)
    vi = _vertex_index(poly, point.coords)
    if vi is not None:
        return ("v", s.corner_index[(point.polygon, vi)][0])
    reps = representations(s, point)
    return min(("p", r.polygon, r.coords.x, r.coords.y) for r in reps)


# ---------------------------------------------------------------------------
# shooting


def _exit(poly, p, d):
    """First boundary hit of the ray p + t d (t > 0) inside a convex polygon."""
    best = None
    for j in range(len(poly)):
        a, b = poly.edge(j)
        e = b - a
        den = cross(d, e)
        if den <= 0:
            continue
        t = cross(a - p, e) / den
        if t <= 0:
            continue
        if best is None or t < best:
            best = t
    if best is None:
        raise SurfaceError("ray does not leave polygon (degenerate polygon?)")
    # straight-angle vertices along an edge the ray runs on
    for v in poly.vertices:
        if v != p and cross(d, v - p) == 0:
            tv = dot(v - p, d) / dot(d, d)
            if 0 < tv < best:
                best = tv
    x = p + d * best
    vi = _vertex_index(poly, x)
    if vi is not None:
        return best, x, ("vertex", vi)
    for j in range(len(poly)):
        a, b = poly.edge(j)
        if point_on_segment(x, a, b):
            return best, x, ("edge", j)
    raise SurfaceError("exit point not on polygon boundary")


def _tangent_boundary(s, poly, p, x) -> bool:
    for j in range(len(poly)):
        a, b = poly.edge(j)
        if point_on_segment(p, a, b) and point_on_segment(x, a, b):
            if not s.is_glued(EdgeRef(poly.id, j)):
                return True
    return False


class _Tracer:
    def __init__(self, s, pid, p, d, max_sq, start_germ, stop_at_vertices):
        self.s = s
        self.pid, self.p, self.d = pid, p, d
        self.sign, self.offset = 1, ZERO
        self.dnorm = d.norm2()
        self.max_sq = Q(max_sq) if max_sq is not None else None
        self.start_germ = start_germ
        self.stop_at_vertices = stop_at_vertices
        self.T = Fraction(0)
        self.segments: list[Segment] = []
        self.crossings: list[EdgeRef] = []
        self.passages: list[Passage] = []
        self.reps: list[tuple[str, Vec2, Vec2]] = []

    def fits(self, t) -> bool:
        if self.max_sq is None:
            return True
        total = self.T + t
        return total * total * self.dnorm <= self.max_sq

    def add(self, pid, a, b, t):
        self.segments.append(Segment(pid, a, b, self.sign, self.offset))
        self.T += t

    def closure_in(self, pid, a, x, d):
        """Parameter along a->x where the start state recurs, if any."""
        for rp, rpt, rd in self.reps:
            if rp != pid or not point_on_segment(rpt, a, x):
                continue
            if d == rd or d == -rd:
                t = dot(rpt - a, d) / dot(d, d)
                if t == 0 and not self.segments:
                    continue
                return t, d != rd
        return None

    def finish(self, start, term, end_germ=None, flipped=False) -> Trajectory:
        return Trajectory(start, self.d0, tuple(self.segments), term, self.T, self.start_germ,
                          end_germ, flipped, tuple(self.crossings), tuple(self.passages))

    def run(self, start: SurfacePoint) -> Trajectory:
        s = self.s
        self.d0 = self.d
        for _ in range(1_000_000):
            poly = s.polygon(self.pid)
            p, d = self.p, self.d
            t, x, (kind, idx) = _exit(poly, p, d)
            if _tangent_boundary(s, poly, p, x):
                return self.finish(start, Termination.HIT_BOUNDARY)
            hit = self.closure_in(self.pid, p, x, d)
            if hit is not None and self.fits(hit[0]):
                tc, flipped = hit
                self.add(self.pid, p, p + d * tc, tc)
                return self.finish(start, Termination.CLOSED, flipped=flipped)
            if not self.fits(t):
                return self.finish(start, Termination.LENGTH_BUDGET)
            self.add(self.pid, p, x, t)
            if kind == "edge":
                e = EdgeRef(self.pid, idx)
                tr = s.transfer(e)
                if tr is None:
                    return self.finish(start, Termination.HIT_BOUNDARY)
                self.crossings.append(e)
                dev = Vec2(self.sign * x.x + self.offset.x, self.sign * x.y + self.offset.y)
                self.pid = tr.target.polygon
                self.p = tr.apply(x)
                self.d = d * tr.sign
                self.sign *= tr.sign
                self.offset = dev - self.p * self.sign
                continue
            incoming = germ_at_corner(s, self.pid, idx, -d)
            cone = s.cones[incoming.cone]
            if cone.on_boundary:
                term = Termination.HIT_SINGULARITY if cone.is_singular else Termination.HIT_BOUNDARY
                return self.finish(start, term, end_germ=incoming)
            if cone.is_singular:
                return self.finish(start, Termination.HIT_SINGULARITY, end_germ=incoming)
            if self.stop_at_vertices:
                return self.finish(start, Termination.HIT_VERTEX, end_germ=incoming)
            out = rotate(s, incoming, 1)
            self.passages.append(Passage(cone.index, incoming, out, len(self.segments) - 1))
            if self.start_germ is not None and out == self.start_germ:
                return self.finish(start, Termination.CLOSED)
            corner = cone.corners[out.corner]
            dev = Vec2(self.sign * x.x + self.offset.x, self.sign * x.y + self.offset.y)
            nd = d if same_ray(out.vec(), d) else -d
            if nd != d:
                self.sign = -self.sign
            self.pid = corner.polygon
            self.p = s.polygon(corner.polygon).vertex(corner.vertex)
            self.d = nd
            self.offset = dev - self.p * self.sign
        raise SurfaceError("trace did not terminate")


def _check_direction(d) -> Vec2:
    d = Vec2.of(*d)
    if d.is_zero():
        raise ValueError("direction must be nonzero")
    return d


def shoot(s: HalfTranslationSurface, p: SurfacePoint, d, max_sq_length=None,
          stop_at_vertices: bool = False) -> Trajectory:
    """Follow the straight line from ``p`` in direction ``d``.

    ``d`` keeps its scale: the trajectory parameter counts multiples of ``d``
    and squared lengths are ``param**2 * |d|**2``.
    """
    conv = s.convex
    d = _check_direction(d)
    p = locate(s, p)
    poly = conv.polygon(p.polygon)
    vi = _vertex_index(poly, p.coords)
    if vi is not None:
        g = _regular_vertex_germ(conv, p.polygon, vi, d)
        if g is None:
            raise PointOutsideSurface("direction does not enter the polygon at this vertex")
        d = d if same_ray(g.vec(), d) else -d
        return _shoot_from_germ(conv, g, d, max_sq_length, stop_at_vertices, p)
    ei = _on_edge(poly, p.coords)
    if ei is not None:
        a, b = poly.edge(ei)
        if cross(d, b - a) > 0:
            tr = conv.transfer(EdgeRef(p.polygon, ei))
            if tr is None:
                return Trajectory(p, d, (), Termination.HIT_BOUNDARY, Fraction(0))
            tracer = _Tracer(conv, tr.target.polygon, tr.apply(p.coords), d * tr.sign,
                             max_sq_length, None, stop_at_vertices)
            tracer.sign = tr.sign
            tracer.offset = p.coords - tracer.p * tracer.sign
            tracer.crossings.append(EdgeRef(p.polygon, ei))
            tracer.reps = [(r.polygon, r.coords, d if r.polygon == p.polygon and r.coords == p.coords
                            else d * tr.sign) for r in representations(conv, p)]
            traj = tracer.run(p)
            return Trajectory(p, d, traj.segments, traj.termination, traj.param, None,
                              traj.end_germ, traj.flipped, traj.crossings, traj.passages)
    tracer = _Tracer(conv, p.polygon, p.coords, d, max_sq_length, None, stop_at_vertices)
    reps = [(p.polygon, p.coords, d)]
    if ei is not None:
        tr = conv.transfer(EdgeRef(p.polygon, ei))
        if tr is not None:
            reps.append((tr.target.polygon, tr.apply(p.coords), d * tr.sign))
    tracer.reps = reps
    return tracer.run(p)


def _regular_vertex_germ(conv, pid, vi, d):
    """Germ for local direction ``d`` at a vertex; other corners only at regular points."""
    if germ_in_sector(conv, pid, vi, d):
        return germ_at_corner(conv, pid, vi, d)
    cone_i, c = conv.corner_index[(pid, vi)]
    cone = conv.cones[cone_i]
    if not cone.is_regular_interior:
        return None
    v = d
    for step in range(len(cone)):
        v = v * cone.link_signs[(c + step) % len(cone)]
        corner = cone.corners[(c + step + 1) % len(cone)]
        if rel_diamond(corner.start, v) <= rel_diamond(corner.start, corner.end):
            return make_germ(conv, cone, (c + step + 1) % len(cone), v)
    return None


def _in_frame(g: Germ, v) -> Vec2:
    """``v`` rescaled onto the ray of ``g`` (frames differ across flips)."""
    lam = abs(v.x / g.dir[0]) if g.dir[0] else abs(v.y / g.dir[1])
    return g.vec() * lam


def _shoot_from_germ(conv, g: Germ, d, max_sq, stop_at_vertices, start=None) -> Trajectory:
    corner = conv.cones[g.cone].corners[g.corner]
    v = conv.polygon(corner.polygon).vertex(corner.vertex)
    if not same_ray(g.vec(), d):
        d = g.vec()
    tracer = _Tracer(conv, corner.polygon, v, d, max_sq, g, stop_at_vertices)
    tracer.offset = ZERO
    return tracer.run(start or SurfacePoint(corner.polygon, v))


def shoot_germ(s: HalfTranslationSurface, g: Germ, max_sq_length=None, scale=None,
               stop_at_vertices: bool = False) -> Trajectory:
    """Trace from a cone point along germ ``g`` (germs live on ``s.convex``)."""
    d = g.vec() if scale is None else Vec2.of(*scale)
    return _shoot_from_germ(s.convex, g, d, max_sq_length, stop_at_vertices)


# ---------------------------------------------------------------------------
# continuation rules at cone points


def legal_arc(s: HalfTranslationSurface, incoming: Germ):
    """Extremes of the legal outgoing arc: (right-tight, left-tight, continuum?)."""
    conv = s.convex
    cone = conv.cones[incoming.cone]
    right = rotate(conv, incoming, 1)
    left = rotate(conv, incoming, -1)
    if cone.on_boundary:
        continuum = True
    else:
        continuum = cone.k > 3
    return right, left, continuum


def continuations(s: HalfTranslationSurface, incoming: Germ,
                  policy: Policy = Policy.ENUMERATE) -> list[Germ]:
    """Legal outgoing germs after arriving along ``incoming``.

    ``incoming`` is the germ pointing back along the arriving path.  Regular
    interior points admit only the straight continuation.
    """
    conv = s.convex
    cone = conv.cones[incoming.cone]
    right, left, _ = legal_arc(conv, incoming)
    if cone.is_regular_interior:
        return [right]
    policy = Policy(policy)
    if policy is Policy.RIGHT_TIGHT:
        return [g for g in (right,) if g is not None]
    if policy is Policy.LEFT_TIGHT:
        return [g for g in (left,) if g is not None]
    out = []
    for g in (right, left):
        if g is not None and g not in out:
            out.append(g)
    return out


# ---------------------------------------------------------------------------
# saddle connections


@dataclass(frozen=True)
class SaddleConnection:
    start: Germ
    end: Germ
    holonomy: Vec2
    trajectory: Trajectory = field(compare=False, repr=False)

    @property
    def sq_length(self) -> Fraction:
        return self.holonomy.norm2()

    @property
    def segments(self) -> tuple[Segment, ...]:
        return self.trajectory.segments

    @property
    def itinerary(self) -> tuple[str, ...]:
        return self.trajectory.itinerary()

    @property
    def passages(self):
        return self.trajectory.passages

    @property
    def end_holonomy(self) -> Vec2:
        """Holonomy of the reversed connection, in the frame of its start."""
        return _in_frame(self.end, self.holonomy)

    def key(self):
        return (self.start, self.holonomy.x, self.holonomy.y)

    def reverse_key(self):
        h = self.end_holonomy
        return (self.end, h.x, h.y)

    def unoriented_key(self):
        return min(self.key(), self.reverse_key())

    def reversed(self, s: HalfTranslationSurface) -> "SaddleConnection":
        return saddle_connection_from_germ(s, self.end, self.end_holonomy)


def saddle_connection_from_germ(s: HalfTranslationSurface, g: Germ, holonomy=None,
                                max_sq_length=None) -> SaddleConnection:
    """Trace from ``g`` to the next singularity and package the result."""
    if holonomy is not None:
        holonomy = _in_frame(g, Vec2.of(*holonomy))
        budget = holonomy.norm2()
    else:
        budget = max_sq_length
    traj = shoot_germ(s, g, budget, scale=holonomy)
    if traj.termination is not Termination.HIT_SINGULARITY:
        raise SurfaceError(f"germ {g} does not reach a singularity "
                           f"within the budget ({traj.termination.value})")
    if holonomy is not None and traj.param != 1:
        raise SurfaceError("singularity reached before the requested holonomy")
    return SaddleConnection(g, traj.end_germ, _in_frame(g, traj.holonomy), traj)


def _arc_intersection(A, B, C, D):
    if in_closed_arc(A, B, C):
        start = C
    elif in_closed_arc(C, D, A):
        start = A
    else:
        return None
    if in_closed_arc(A, B, D):
        end = D
    elif in_closed_arc(C, D, B):
        end = B
    else:
        return None
    if rel_diamond(A, start) > rel_diamond(A, end):
        return None
    if same_ray(start, end):
        return None
    return start, end


def _seg_dist2(p0, p1) -> Fraction:
    e = p1 - p0
    ee = e.norm2()
    t = -dot(p0, e) / ee
    t = min(Fraction(1), max(Fraction(0), t))
    return (p0 + e * t).norm2()


def _blocked(blocked, v) -> bool:
    n2 = v.norm2()
    return any(same_ray(b, v) and n2 > thr for b, thr in blocked)


def _unfold_from_corner(conv, cone, c, budget, found):
    corner = cone.corners[c]
    poly = conv.polygon(corner.polygon)
    apex = poly.vertex(corner.vertex)
    blocked = []
    if not conv.is_glued(EdgeRef(poly.id, corner.vertex)):
        blocked.append((corner.start, Fraction(0)))
    if not conv.is_glued(EdgeRef(poly.id, (corner.vertex - 1) % len(poly))):
        blocked.append((corner.end, Fraction(0)))
    stack = [(poly.id, 1, -apex, corner.start, corner.end, None, blocked)]
    while stack:
        pid, sg, off, A, B, entry, blocked = stack.pop()
        q = conv.polygon(pid)
        dev = [Vec2(sg * v.x + off.x, sg * v.y + off.y) for v in q.vertices]
        blocked = list(blocked)
        for j, V in enumerate(dev):
            if V.is_zero() or V.norm2() > budget or not in_closed_arc(A, B, V):
                continue
            if _blocked(blocked, V):
                continue
            target = conv.cone_of(pid, j)
            if target.is_singular:
                back = -V * sg
                if germ_in_sector(conv, pid, j, back):
                    g0 = make_germ(conv, cone, c, V)
                    key = (g0, _in_frame(g0, V))
                    found.setdefault(key, germ_at_corner(conv, pid, j, back))
                blocked.append((V, V.norm2()))
            elif target.on_boundary:
                blocked.append((V, V.norm2()))
        n = len(q)
        for j in range(n):
            P0, P1 = dev[j], dev[(j + 1) % n]
            if cross(P1 - P0, -P0) == 0 and not conv.is_glued(EdgeRef(pid, j)):
                # rays running along a boundary edge stop at its near end
                near = P0 if P0.norm2() <= P1.norm2() else P1
                if not near.is_zero() and in_closed_arc(A, B, near):
                    blocked.append((near, near.norm2()))
        blocked = tuple(blocked)
        for j in range(n):
            if j == entry:
                continue
            P0, P1 = dev[j], dev[(j + 1) % n]
            if cross(P1 - P0, -P0) <= 0 or not conv.is_glued(EdgeRef(pid, j)):
                continue
            sub = _arc_intersection(A, B, P0, P1)
            if sub is None or _seg_dist2(P0, P1) > budget:
                continue
            tr = conv.transfer(EdgeRef(pid, j))
            nsg = sg * tr.sign
            noff = off - tr.offset * nsg
            stack.append((tr.target.polygon, nsg, noff, sub[0], sub[1], tr.target.index, blocked))


def _order_key(sc: SaddleConnection):
    return (sc.sq_length, sc.itinerary, position_key(sc.start))


def position_key(g: Germ):
    return (g.cone, g.corner, g.dir)


def saddle_connections(s: HalfTranslationSurface, max_sq_length, oriented: bool = False
                       ) -> list[SaddleConnection]:
    """All saddle connections with squared length <= ``max_sq_length``.

    Each unoriented connection is listed once unless ``oriented`` is set, in
    which case both orientations appear.
    """
    conv = s.convex
    budget = Q(max_sq_length)
    found: dict = {}
    for cone in compute_singularities(conv):
        for c in range(len(cone)):
            _unfold_from_corner(conv, cone, c, budget, found)
    scs = []
    for (g, hol), end in sorted(found.items(), key=lambda kv: (position_key(kv[0][0]), kv[0][1])):
        sc = saddle_connection_from_germ(conv, g, hol)
        if sc.end != end:
            raise SurfaceError("unfolding and tracing disagree on a saddle connection")
        scs.append(sc)
    if not oriented:
        seen = set()
        uniq = []
        for sc in scs:
            k = sc.unoriented_key()
            if k in seen:
                continue
            seen.add(k)
            uniq.append(sc if sc.key() == k else sc.reversed(conv))
        scs = uniq
    scs.sort(key=_order_key)
    return scs


# ---------------------------------------------------------------------------
# local geodesic check


def _leg_germs(leg):
    if isinstance(leg, SaddleConnection):
        return leg.start, leg.end, leg.passages
    return leg.start_germ, leg.end_germ, leg.passages


def is_local_geodesic(s: HalfTranslationSurface, legs: Sequence, closed: bool = False) -> bool:
    """Check straightness and the angle rule along a chain of straight legs.

    Each leg is a :class:`SaddleConnection` or :class:`Trajectory`; consecutive
    legs must meet at a vertex class (end germ of one, start germ of the next).
    """
    conv = s.convex
    if not legs:
        raise MalformedPath("empty path")
    info = [_leg_germs(leg) for leg in legs]
    for _, _, passages in info:
        for ps in passages:
            if not is_legal_transition(conv, ps.incoming, ps.outgoing):
                return False
    pairs = list(zip(info, info[1:]))
    single_loop = (len(legs) == 1 and isinstance(legs[0], Trajectory)
                   and legs[0].termination is Termination.CLOSED)
    if closed and not single_loop:
        pairs.append((info[-1], info[0]))
    for (_, end, _), (start, _, _) in pairs:
        if end is None or start is None:
            raise MalformedPath("legs do not meet at a vertex class")
        if end.cone != start.cone:
            raise MalformedPath("consecutive legs end and start at different points")
        if not is_legal_transition(conv, end, start):
            return False
    return True


def straight_leg(s: HalfTranslationSurface, g: Germ, holonomy) -> Trajectory:
    """Straight leg from ``g`` stopping at the first vertex class, regular or not."""
    holonomy = Vec2.of(*holonomy)
    traj = shoot_germ(s, g, holonomy.norm2(), scale=holonomy, stop_at_vertices=True)
    if traj.end_germ is None or traj.param != 1:
        raise MalformedPath("leg does not end at a vertex with the given holonomy")
    return traj


def singularity_germs(s: HalfTranslationSurface, direction) -> list[Germ]:
    """Outgoing germs parallel to ``direction`` (either sign) at every singularity."""
    conv = s.convex
    d = Vec2.of(*direction)
    out = []
    for cone in compute_singularities(conv):
        for c, corner in enumerate(cone.corners):
            for v in (d, -d):
                r = rel_diamond(corner.start, v)
                if r <= rel_diamond(corner.start, corner.end):
                    g = make_germ(conv, cone, c, v)
                    if g not in out:
                        out.append(g)
    out.sort(key=lambda g: (g.cone, position(conv, g)))
    return out


def iter_germs(s: HalfTranslationSurface, directions: Iterable) -> Iterable[Germ]:
    for d in directions:
        yield from singularity_germs(s, d)
