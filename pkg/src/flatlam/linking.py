"""Linking of closed flat geodesics through intersection patterns.

Two closed geodesics either cross at a regular point (always linked), touch
at isolated singular points, or share maximal arcs made of saddle
connections.  The last two cases are decided from cyclic orders of germs at
the cone points involved.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import NamedTuple, Sequence

from .cones import Germ, GermsAtDifferentCones, cyclic_order, is_legal_transition
from .exact import (
    Direction,
    Vec2,
    cross,
    dot,
    format_rational,
    point_on_segment,
    segment_intersection,
)
from .surface import (
    EdgeRef,
    HalfTranslationSurface,
    SurfaceError,
    boundary_component_count,
    compute_singularities,
    genus,
)
from .tracer import (
    MalformedPath,
    SaddleConnection,
    SurfacePoint,
    Termination,
    Trajectory,
    canonical_point,
    shoot,
)


class DifferentSurfaces(SurfaceError):
    pass


class FamilyIsLinked(SurfaceError):
    pass


class GermTriple(NamedTuple):
    g1: Germ
    g2: Germ
    g3: Germ


def germ_cyclic_order(s: HalfTranslationSurface, t: GermTriple | Sequence[Germ]) -> int:
    """-1, 0 or +1: the cyclic order of three germs at one cone point."""
    a, b, c = t
    if not (a.cone == b.cone == c.cone):
        raise GermsAtDifferentCones("germs at different cones")
    return cyclic_order(s.convex, a, b, c)


# ---------------------------------------------------------------------------
# closed geodesics


@dataclass(frozen=True)
class _Piece:
    polygon: str
    start: Vec2
    end: Vec2
    leg: int
    t0: Fraction  # parameter of ``start`` inside the leg
    t1: Fraction

    def param(self, p: Vec2) -> Fraction:
        d = self.end - self.start
        return self.t0 + (self.t1 - self.t0) * dot(p - self.start, d) / dot(d, d)


class Visit(NamedTuple):
    """Passage of a saddle-connection geodesic through a singularity."""

    index: int  # leg that starts here
    cone: int
    back: Germ  # arriving path, pointing backwards
    forward: Germ  # departing path


@dataclass(frozen=True)
class ClosedGeodesic:
    """A regular closed leaf or a cyclic chain of saddle connections."""

    surface: HalfTranslationSurface = field(repr=False, compare=False)
    connections: tuple[SaddleConnection, ...] = ()
    leaf: Trajectory | None = field(default=None, compare=False)
    leaf_key: tuple = ()

    @property
    def is_regular(self) -> bool:
        return self.leaf is not None

    def __len__(self) -> int:
        return len(self.connections) if not self.is_regular else 1

    def keys(self) -> tuple:
        return tuple(sc.key() for sc in self.connections)

    def visits(self) -> list[Visit]:
        n = len(self.connections)
        out = []
        for i, sc in enumerate(self.connections):
            prev = self.connections[i - 1]
            out.append(Visit(i, sc.start.cone, prev.end, sc.start))
        return out if n else []

    def pieces(self) -> list[_Piece]:
        out = []
        legs = [self.leaf] if self.is_regular else [sc.trajectory for sc in self.connections]
        for li, leg in enumerate(legs):
            t = Fraction(0)
            d = leg.direction
            for seg in leg.segments:
                dt = _param_step(seg, d)
                out.append(_Piece(seg.polygon, seg.start, seg.end, li, t, t + dt))
                t += dt
        return out

    def passages(self):
        legs = [self.leaf] if self.is_regular else [sc.trajectory for sc in self.connections]
        out = []
        for li, leg in enumerate(legs):
            for ps in leg.passages:
                seg = leg.segments[ps.segment]
                out.append((li, seg, ps))
        return out

    def period(self) -> Fraction:
        return self.leaf.param if self.is_regular else Fraction(len(self.connections))

    def reversed(self) -> "ClosedGeodesic":
        s = self.surface
        if self.is_regular:
            leaf = self.leaf
            back = shoot(s, leaf.start, -leaf.direction, leaf.sq_length)
            return regular_geodesic(s, back)
        scs = tuple(sc.reversed(s) for sc in reversed(self.connections))
        return ClosedGeodesic(s, scs)

    def rerooted(self, k: int) -> "ClosedGeodesic":
        if self.is_regular:
            return self
        k %= len(self.connections)
        return ClosedGeodesic(self.surface, self.connections[k:] + self.connections[:k])

    def normalized(self) -> "ClosedGeodesic":
        """Rotate the connection list to start at its least key."""
        if self.is_regular or not self.connections:
            return self
        n = len(self.connections)
        keys = self.keys()
        best = min(range(n), key=lambda k: keys[k:] + keys[:k])
        return self.rerooted(best)

    def image_key(self) -> tuple:
        """Identity of the image as a set (orientation and start forgotten)."""
        if self.is_regular:
            return ("leaf",) + self.leaf_key
        return ("graph",) + tuple(sorted({sc.unoriented_key() for sc in self.connections}))


def _param_step(seg, d: Vec2) -> Fraction:
    """Parameter increment of a segment parallel to +-d."""
    h = seg.end - seg.start
    if d.x != 0:
        r = h.x / d.x
    else:
        r = h.y / d.y
    return abs(r)


def regular_geodesic(s: HalfTranslationSurface, t: Trajectory) -> ClosedGeodesic:
    if t.termination is not Termination.CLOSED or t.flipped:
        raise MalformedPath(f"trajectory is not a closed regular leaf ({t.termination.value})")
    conv = s.convex
    # leaf identity: least (polygon, height, direction) over its segments
    reps = []
    for seg in t.segments:
        dc = Direction.of(seg.end - seg.start)
        reps.append((seg.polygon, cross(dc.vec(), seg.start), dc))
        poly = conv.polygon(seg.polygon)
        for j in range(len(poly)):
            a, b = poly.edge(j)
            tr = conv.transfer(EdgeRef(seg.polygon, j))
            if tr and point_on_segment(seg.start, a, b) and point_on_segment(seg.end, a, b):
                reps.append((tr.target.polygon, cross(dc.vec(), tr.apply(seg.start)), dc))
    return ClosedGeodesic(conv, (), t, (min(reps),))


def saddle_geodesic(s: HalfTranslationSurface, connections: Sequence[SaddleConnection],
                    check: bool = True) -> ClosedGeodesic:
    """Closed geodesic made of saddle connections joined end to start."""
    conv = s.convex
    scs = tuple(connections)
    if not scs:
        raise MalformedPath("empty connection list")
    for a, b in zip(scs, scs[1:] + scs[:1]):
        if a.end.cone != b.start.cone:
            raise MalformedPath("connections do not chain at cone points")
        if check and not is_legal_transition(conv, a.end, b.start):
            raise MalformedPath("transition violates the angle condition")
    return ClosedGeodesic(conv, scs)


# ---------------------------------------------------------------------------
# events


class EventKind(enum.Enum):
    TRANSVERSE_REGULAR = "transverse-regular"
    ISOLATED_SINGULAR = "isolated-singular"
    SHARED_ARC = "shared-arc"


@dataclass(frozen=True)
class IntersectionEvent:
    kind: EventKind
    where: tuple  # point identity or cone indices
    germs: dict = field(compare=False, default_factory=dict)
    params: tuple = ()
    linked: bool = False

    def describe(self) -> str:
        status = "linked" if self.linked else "ok"
        if self.kind is EventKind.TRANSVERSE_REGULAR:
            return f"{self.kind.value} at {_fmt_where(self.where)} [{status}]"
        if self.kind is EventKind.ISOLATED_SINGULAR:
            return f"{self.kind.value} at cone {self.where[0]} [{status}]"
        return (f"{self.kind.value} from cone {self.where[0]} to cone {self.where[1]}, "
                f"{self.params[2]} connection(s) [{status}]")


def _fmt_where(w) -> str:
    if w[0] == "v":
        return f"vertex class {w[1]}"
    return f"{w[1]}({format_rational(w[2])}, {format_rational(w[3])})"


@dataclass(frozen=True)
class IntersectionPattern:
    events: tuple[IntersectionEvent, ...]
    same_image: bool = False

    def __iter__(self):
        return iter(self.events)

    def __len__(self) -> int:
        return len(self.events)

    @property
    def linked(self) -> bool:
        return not self.same_image and any(e.linked for e in self.events)


def _mod(x: Fraction, p: Fraction) -> Fraction:
    return x - p * (x // p) if p else x


def _transverse_events(conv, c1: ClosedGeodesic, c2: ClosedGeodesic, self_mode: bool):
    P1, P2 = c1.pieces(), c2.pieces()
    per1, per2 = c1.period(), c2.period()
    found = {}
    same = False
    by_poly: dict[str, list] = {}
    for q in P2:
        by_poly.setdefault(q.polygon, []).append(q)
    for p in P1:
        for q in by_poly.get(p.polygon, ()):
            hit = segment_intersection(p.start, p.end, q.start, q.end)
            if hit is None:
                continue
            dp, dq = p.end - p.start, q.end - q.start
            if cross(dp, dq) == 0:
                if hit[0] == "overlap" and c1.is_regular and c2.is_regular:
                    if not self_mode:
                        same = True
                continue
            P = hit[1]
            poly = conv.polygon(p.polygon)
            if P in poly.vertices:
                continue
            pos1 = (p.leg, _mod(p.param(P), per1) if c1.is_regular else p.param(P))
            pos2 = (q.leg, _mod(q.param(P), per2) if c2.is_regular else q.param(P))
            if self_mode:
                if pos1 == pos2:
                    continue
                pos1, pos2 = min(pos1, pos2), max(pos1, pos2)
            where = canonical_point(conv, SurfacePoint(p.polygon, P))
            found.setdefault((where, pos1, pos2),
                             IntersectionEvent(EventKind.TRANSVERSE_REGULAR, where, {},
                                               (pos1, pos2), True))
    # crossings at regular vertex classes
    for li, seg, ps in c1.passages():
        for lj, seg2, ps2 in c2.passages():
            if ps.cone != ps2.cone:
                continue
            if {ps.incoming, ps.outgoing} == {ps2.incoming, ps2.outgoing}:
                if c1.is_regular and c2.is_regular and not self_mode:
                    same = True
                continue
            pos1 = (li, ps.segment)
            pos2 = (lj, ps2.segment)
            if self_mode:
                pos1, pos2 = min(pos1, pos2), max(pos1, pos2)
            where = ("v", ps.cone)
            found.setdefault((where, pos1, pos2),
                             IntersectionEvent(EventKind.TRANSVERSE_REGULAR, where, {},
                                               (pos1, pos2), True))
    return same, [found[k] for k in sorted(found, key=repr)]


def _chains(c1: ClosedGeodesic, c2: ClosedGeodesic, self_mode: bool):
    """Maximal runs of common saddle connections.

    Returns (cyclic, runs); each run is (i, k, eps, length): c1 legs
    i..i+length-1 coincide with c2 legs k, k+eps, ... (eps = -1 means c2
    traverses them backwards).
    """
    A, B = c1.connections, c2.connections
    m, n = len(A), len(B)
    akeys = [sc.key() for sc in A]
    bkeys = [sc.key() for sc in B]
    brev = [sc.reverse_key() for sc in B]
    match = set()
    for i in range(m):
        for k in range(n):
            if akeys[i] == bkeys[k]:
                match.add((i, k, 1))
            if akeys[i] == brev[k]:
                match.add((i, k, -1))
    if self_mode:
        match = {x for x in match if not (x[2] == 1 and x[0] == x[1])}

    def nxt(x):
        i, k, e = x
        return ((i + 1) % m, (k + e) % n, e)

    def prv(x):
        i, k, e = x
        return ((i - 1) % m, (k - e) % n, e)

    runs = []
    cyclic = False
    seen = set()
    for x in sorted(match):
        if x in seen or prv(x) in match:
            continue
        length = 0
        y = x
        while y in match and y not in seen:
            seen.add(y)
            length += 1
            y = nxt(y)
        runs.append((x[0], x[1], x[2], length))
    if seen != match:
        cyclic = True
    return cyclic, runs


def _arc_event(conv, c1, c2, run) -> IntersectionEvent:
    i, k, eps, length = run
    A, B = c1.connections, c2.connections
    m, n = len(A), len(B)
    last = (i + length - 1) % m
    before1, arc_start = A[i - 1].end, A[i].start
    arc_end, after1 = A[last].end, A[(last + 1) % m].start
    if eps == 1:
        before2 = B[(k - 1) % n].end
        after2 = B[(k + length) % n].start
    else:
        # c2 runs backwards: its forward germ at x1 leaves along B[k+1] reversed
        before2 = B[(k + 1) % n].start
        after2 = B[(k - length) % n].end
    x1, x2 = arc_start.cone, arc_end.cone
    o2 = cyclic_order(conv, after1, after2, arc_end)
    o1 = cyclic_order(conv, before1, before2, arc_start)
    germs = {"first-before": before1, "second-before": before2, "arc-start": arc_start,
             "first-after": after1, "second-after": after2, "arc-end": arc_end}
    return IntersectionEvent(EventKind.SHARED_ARC, (x1, x2), germs,
                             (i, k, length, eps), o2 != -o1)


def _isolated_events(conv, c1, c2, self_mode: bool):
    out = []
    V1, V2 = c1.visits(), c2.visits()
    for a in V1:
        for b in V2:
            if a.cone != b.cone:
                continue
            if self_mode and b.index <= a.index:
                continue
            if {a.back, a.forward} & {b.back, b.forward}:
                continue
            left = cyclic_order(conv, a.forward, b.forward, a.back)
            right = cyclic_order(conv, a.forward, b.back, a.back)
            germs = {"first-back": a.back, "first-forward": a.forward,
                     "second-back": b.back, "second-forward": b.forward}
            out.append(IntersectionEvent(EventKind.ISOLATED_SINGULAR, (a.cone,), germs,
                                         (a.index, b.index), left != right))
    return out


def intersection_pattern(c1: ClosedGeodesic, c2: ClosedGeodesic,
                         _self: bool = False) -> IntersectionPattern:
    if c1.surface != c2.surface:
        raise DifferentSurfaces("geodesics live on different surfaces")
    conv = c1.surface
    same, events = _transverse_events(conv, c1, c2, _self)
    if same:
        return IntersectionPattern((), True)
    if c1.connections and c2.connections:
        cyclic, runs = _chains(c1, c2, _self)
        if cyclic and not _self:
            return IntersectionPattern((), True)
        arcs = []
        done = set()
        for run in runs:
            if _self:
                # the same overlap is seen once from each of its two passages
                i, k, eps, length = run
                m = len(c1.connections)
                if eps == 1:
                    mate = (k, i, 1, length)
                else:
                    mate = ((k - length + 1) % m, (i + length - 1) % m, -1, length)
                if mate in done:
                    continue
                done.add(run)
            arcs.append(_arc_event(conv, c1, c2, run))
        events += arcs
        events += _isolated_events(conv, c1, c2, _self)
    return IntersectionPattern(tuple(events), False)


def are_linked(c1: ClosedGeodesic, c2: ClosedGeodesic) -> bool:
    return intersection_pattern(c1, c2).linked


def is_self_linked(c: ClosedGeodesic) -> bool:
    """Self-crossings of c, the trivial overlap with itself excluded."""
    return intersection_pattern(c, c, _self=True).linked


# ---------------------------------------------------------------------------
# family bound


@dataclass(frozen=True)
class BoundReport:
    count: int
    bound: int
    singularities: int
    genus: int
    boundary_components: int

    @property
    def ok(self) -> bool:
        return self.count <= self.bound


def family_ceiling(s: HalfTranslationSurface) -> tuple[int, int, int, int]:
    conv = s.convex
    k = len(compute_singularities(conv))
    g = genus(conv)
    b = boundary_component_count(conv)
    return k * k * (6 * g + 3 * b - 2), k, g, b


def check_family_bounds(s: HalfTranslationSurface, family: Sequence[ClosedGeodesic]) -> BoundReport:
    """Count distinct saddle connections used by a non-linked family."""
    for c in family:
        if is_self_linked(c):
            raise FamilyIsLinked("a member of the family is self-linked")
    for a, b in combinations(family, 2):
        if are_linked(a, b):
            raise FamilyIsLinked("two members of the family are linked")
    used = set()
    for c in family:
        for sc in c.connections:
            used.add(sc.unoriented_key())
    bound, k, g, b = family_ceiling(s)
    return BoundReport(len(used), bound, k, g, b)
