"""Half-translation surfaces as glued euclidean polygons."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

from .exact import (
    Direction,
    Vec2,
    cross,
    orient,
    point_on_segment,
    rel_diamond,
    same_ray,
    segment_intersection,
    signed_area2,
)


class SurfaceError(ValueError):
    pass


class AngleNotMultipleOfPi(SurfaceError):
    pass


class PointOutsideSurface(SurfaceError):
    pass


class GluingKind(enum.Enum):
    TRANSLATION = "translation"
    FLIP = "flip"

    @property
    def sign(self) -> int:
        return 1 if self is GluingKind.TRANSLATION else -1


class EdgeRef(NamedTuple):
    polygon: str
    index: int


@dataclass(frozen=True)
class Polygon:
    id: str
    vertices: tuple[Vec2, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(Vec2.of(*v) for v in self.vertices))

    def __len__(self) -> int:
        return len(self.vertices)

    def vertex(self, i: int) -> Vec2:
        return self.vertices[i % len(self.vertices)]

    def edge(self, i: int) -> tuple[Vec2, Vec2]:
        return self.vertex(i), self.vertex(i + 1)

    def edge_vector(self, i: int) -> Vec2:
        a, b = self.edge(i)
        return b - a

    def area(self) -> Fraction:
        return signed_area2(self.vertices) / 2

    def is_convex(self) -> bool:
        n = len(self)
        return all(orient(self.vertex(i - 1), self.vertex(i), self.vertex(i + 1)) >= 0
                   for i in range(n))

    def contains(self, p) -> bool:
        """Closed containment test (simple polygon, even-odd rule plus boundary)."""
        n = len(self)
        for i in range(n):
            a, b = self.edge(i)
            if point_on_segment(p, a, b):
                return True
        inside = False
        x, y = p
        for i in range(n):
            a, b = self.edge(i)
            if (a.y > y) != (b.y > y):
                xint = a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y)
                if x < xint:
                    inside = not inside
        return inside


@dataclass(frozen=True)
class Gluing:
    a: EdgeRef
    b: EdgeRef
    kind: GluingKind = GluingKind.TRANSLATION

    def __post_init__(self):
        object.__setattr__(self, "a", EdgeRef(*self.a))
        object.__setattr__(self, "b", EdgeRef(*self.b))
        if not isinstance(self.kind, GluingKind):
            object.__setattr__(self, "kind", GluingKind(self.kind))


class EdgeTransfer(NamedTuple):
    """Chart change across a glued edge: z -> sign * z + offset."""

    target: EdgeRef
    sign: int
    offset: Vec2

    def apply(self, z) -> Vec2:
        return Vec2(self.sign * z[0] + self.offset.x, self.sign * z[1] + self.offset.y)


class Corner(NamedTuple):
    polygon: str
    vertex: int
    start: Vec2  # outgoing edge vector, first boundary ray of the sector
    end: Vec2  # reversed incoming edge vector, last boundary ray


@dataclass(frozen=True)
class ConePoint:
    """A vertex class with its corner sectors listed counterclockwise.

    ``link_signs[c]`` is the chart sign relating corner ``c`` to corner
    ``c + 1``: a vector ``v`` in the frame of ``c`` reads ``link_signs[c] * v``
    in the frame of ``c + 1``.  For boundary classes the last entry is unused.
    """

    index: int
    corners: tuple[Corner, ...]
    link_signs: tuple[int, ...]
    k: int
    on_boundary: bool

    @property
    def angle_halfturns(self) -> int:
        return self.k

    @property
    def is_singular(self) -> bool:
        return self.k >= 2 if self.on_boundary else self.k >= 3

    @property
    def is_regular_interior(self) -> bool:
        return not self.on_boundary and self.k == 2

    def __len__(self) -> int:
        return len(self.corners)


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def __iter__(self):
        return iter(self.violations)

    def __len__(self) -> int:
        return len(self.violations)


@dataclass(frozen=True)
class HalfTranslationSurface:
    polygons: tuple[Polygon, ...]
    gluings: tuple[Gluing, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "polygons", tuple(self.polygons))
        object.__setattr__(self, "gluings", tuple(self.gluings))

    # -- lookup -----------------------------------------------------------

    @cached_property
    def _by_id(self) -> dict[str, Polygon]:
        return {p.id: p for p in self.polygons}

    def polygon(self, pid: str) -> Polygon:
        try:
            return self._by_id[pid]
        except KeyError:
            raise SurfaceError(f"unknown polygon {pid!r}") from None

    @cached_property
    def _partner(self) -> dict[EdgeRef, tuple[EdgeRef, GluingKind]]:
        out = {}
        for g in self.gluings:
            out[g.a] = (g.b, g.kind)
            out[g.b] = (g.a, g.kind)
        return out

    def partner(self, e: EdgeRef) -> tuple[EdgeRef, GluingKind] | None:
        return self._partner.get(EdgeRef(*e))

    def is_glued(self, e: EdgeRef) -> bool:
        return EdgeRef(*e) in self._partner

    def edges(self) -> Iterable[EdgeRef]:
        for p in self.polygons:
            for i in range(len(p)):
                yield EdgeRef(p.id, i)

    def boundary_edges(self) -> list[EdgeRef]:
        return [e for e in self.edges() if not self.is_glued(e)]

    @cached_property
    def _transfers(self) -> dict[EdgeRef, EdgeTransfer]:
        out = {}
        for e, (f, kind) in self._partner.items():
            a0, a1 = self.polygon(e.polygon).edge(e.index)
            b0, _ = self.polygon(f.polygon).edge(f.index)
            s = kind.sign
            out[e] = EdgeTransfer(f, s, Vec2(b0.x - s * a1.x, b0.y - s * a1.y))
        return out

    def transfer(self, e: EdgeRef) -> EdgeTransfer | None:
        return self._transfers.get(EdgeRef(*e))

    # -- global quantities -----------------------------------------------

    def area(self) -> Fraction:
        return sum((p.area() for p in self.polygons), Fraction(0))

    @cached_property
    def cones(self) -> tuple[ConePoint, ...]:
        """All vertex classes, regular ones included."""
        return _vertex_classes(self)

    @cached_property
    def corner_index(self) -> dict[tuple[str, int], tuple[int, int]]:
        out = {}
        for cone in self.cones:
            for c, corner in enumerate(cone.corners):
                out[(corner.polygon, corner.vertex)] = (cone.index, c)
        return out

    def cone_of(self, polygon: str, vertex: int) -> ConePoint:
        n = len(self.polygon(polygon))
        return self.cones[self.corner_index[(polygon, vertex % n)][0]]

    def is_convex(self) -> bool:
        return all(p.is_convex() for p in self.polygons)

    @cached_property
    def convex(self) -> "HalfTranslationSurface":
        """This surface, or an equivalent one with non-convex polygons triangulated."""
        if self.is_convex():
            return self
        return triangulate(self, only_nonconvex=True)

    @cached_property
    def piece_of(self) -> dict[str, list[str]]:
        """Map original polygon id -> ids of the convex pieces covering it."""
        conv = self.convex
        out: dict[str, list[str]] = {p.id: [] for p in self.polygons}
        for p in conv.polygons:
            key = p.id if p.id in out else p.id.rsplit("#", 1)[0]
            out[key].append(p.id)
        return out

    def boundary_component_count(self) -> int:
        return len(_boundary_cycles(self))


# ---------------------------------------------------------------------------
# vertex classes


def _next_ccw(s: HalfTranslationSurface, pid: str, i: int):
    """Corner following (pid, i) counterclockwise around its vertex, with link sign."""
    p = s.polygon(pid)
    incoming = EdgeRef(pid, (i - 1) % len(p))
    got = s.partner(incoming)
    if got is None:
        return None
    f, kind = got
    return (f.polygon, f.index), kind.sign


def _prev_ccw(s: HalfTranslationSurface, pid: str, i: int):
    p = s.polygon(pid)
    got = s.partner(EdgeRef(pid, i % len(p)))
    if got is None:
        return None
    f, kind = got
    q = s.polygon(f.polygon)
    return (f.polygon, (f.index + 1) % len(q)), kind.sign


def _corner(s: HalfTranslationSurface, pid: str, i: int) -> Corner:
    p = s.polygon(pid)
    v = p.vertex(i)
    return Corner(pid, i % len(p), p.vertex(i + 1) - v, p.vertex(i - 1) - v)


def _count_halfturns(corners: Sequence[Corner], signs: Sequence[int]) -> tuple[int, Vec2]:
    """Half-turns swept by the corner sequence, measured from the first start ray.

    Returns the count and the final ray in the frame of the first corner.
    """
    u0 = corners[0].start
    probes = (u0, -u0)
    sigma = 1
    count = 0
    last = u0
    for c, corner in enumerate(corners):
        a = corner.start * sigma
        b = corner.end * sigma
        span = rel_diamond(a, b)
        for t in probes:
            r = rel_diamond(a, t)
            if 0 < r <= span:
                count += 1
        last = b
        if c < len(signs):
            sigma *= signs[c]
    return count, last


def _vertex_classes(s: HalfTranslationSurface) -> tuple[ConePoint, ...]:
    seen: set[tuple[str, int]] = set()
    cones: list[ConePoint] = []
    for p in s.polygons:
        for i in range(len(p)):
            if (p.id, i) in seen:
                continue
            # walk clockwise to a boundary corner if there is one
            start = (p.id, i)
            cur = start
            on_boundary = False
            guard = 0
            while True:
                prev = _prev_ccw(s, *cur)
                if prev is None:
                    on_boundary = True
                    break
                cur = prev[0]
                guard += 1
                if cur == start:
                    break
                if guard > 100000:
                    raise SurfaceError("vertex walk does not close")
            first = cur
            corners: list[Corner] = []
            signs: list[int] = []
            cur = first
            while True:
                corners.append(_corner(s, *cur))
                seen.add(cur)
                nxt = _next_ccw(s, *cur)
                if nxt is None:
                    break
                signs.append(nxt[1])
                cur = nxt[0]
                if cur == first:
                    break
            count, last = _count_halfturns(corners, signs)
            u0 = corners[0].start
            if on_boundary:
                closes = cross(u0, last) == 0
            else:
                sigma = 1
                for sg in signs:
                    sigma *= sg
                closes = cross(u0, last) == 0 and same_ray(u0 * sigma, last)
            if not closes:
                raise AngleNotMultipleOfPi(
                    f"vertex class of corner {first} has angle not a multiple of pi")
            if on_boundary:
                signs.append(1)
            cones.append(ConePoint(len(cones), tuple(corners), tuple(signs), count, on_boundary))
    return tuple(cones)


def compute_singularities(s: HalfTranslationSurface) -> list[ConePoint]:
    """Vertex classes of angle k*pi with k >= 3 (interior) or k >= 2 (boundary)."""
    return [c for c in s.cones if c.is_singular]


def euler_characteristic(s: HalfTranslationSurface) -> int:
    glued = len(s.gluings)
    unglued = sum(1 for e in s.edges() if not s.is_glued(e))
    return len(s.cones) - (glued + unglued) + len(s.polygons)


def _boundary_cycles(s: HalfTranslationSurface) -> list[list[EdgeRef]]:
    unglued = [e for e in s.edges() if not s.is_glued(e)]
    todo = set(unglued)
    cycles = []
    for e in unglued:
        if e not in todo:
            continue
        cyc = []
        cur = e
        while cur in todo:
            todo.discard(cur)
            cyc.append(cur)
            # from the end vertex of cur, walk clockwise to the next unglued edge
            p = s.polygon(cur.polygon)
            corner = (cur.polygon, (cur.index + 1) % len(p))
            while True:
                if not s.is_glued(EdgeRef(*corner)):
                    cur = EdgeRef(*corner)
                    break
                corner = _prev_ccw(s, *corner)[0]
        cycles.append(cyc)
    return cycles


def boundary_component_count(s: HalfTranslationSurface) -> int:
    return len(_boundary_cycles(s))


def genus(s: HalfTranslationSurface) -> int:
    g2 = 2 - euler_characteristic(s) - boundary_component_count(s)
    if g2 % 2 or g2 < 0:
        raise SurfaceError(f"non-integral genus from chi and boundary count ({g2}/2)")
    return g2 // 2


def gauss_bonnet_defect(s: HalfTranslationSurface) -> int:
    """sum (k-2) over interior classes + sum (k-1) over boundary classes + 2 chi."""
    total = sum((c.k - 1) if c.on_boundary else (c.k - 2) for c in s.cones)
    return total + 2 * euler_characteristic(s)


# ---------------------------------------------------------------------------
# validation


def _polygon_problems(p: Polygon) -> list[str]:
    out = []
    n = len(p)
    if n < 3:
        return [f"polygon {p.id}: fewer than 3 vertices"]
    for i in range(n):
        if p.vertex(i) == p.vertex(i + 1):
            out.append(f"polygon {p.id}: consecutive vertices {i} and {(i + 1) % n} coincide")
    if out:
        return out
    if p.area() <= 0:
        out.append(f"polygon {p.id}: vertices not in counterclockwise order")
    for i in range(n):
        for j in range(i + 1, n):
            a0, a1 = p.edge(i)
            b0, b1 = p.edge(j)
            hit = segment_intersection(a0, a1, b0, b1)
            if hit is None:
                continue
            adjacent = (j == i + 1) or (i == 0 and j == n - 1)
            if adjacent and hit[0] == "point":
                continue
            out.append(f"polygon {p.id}: edges {i} and {j} intersect (not simple)")
    return out


def validate_surface(s: HalfTranslationSurface) -> ValidationReport:
    """Collect every violated invariant; an empty report means a valid surface."""
    v: list[str] = []
    ids = [p.id for p in s.polygons]
    if not s.polygons:
        return ValidationReport(("surface has no polygons",))
    if len(set(ids)) != len(ids):
        v.append("duplicate polygon ids")
    for p in s.polygons:
        v.extend(_polygon_problems(p))
    by_id = {p.id: p for p in s.polygons}
    used: dict[EdgeRef, int] = {}
    structural = bool(v)
    for gi, g in enumerate(s.gluings):
        bad = False
        for e in (g.a, g.b):
            if e.polygon not in by_id:
                v.append(f"gluing {gi}: dangling reference to polygon {e.polygon!r}")
                bad = True
            elif not 0 <= e.index < len(by_id[e.polygon]):
                v.append(f"gluing {gi}: edge index {e.index} out of range for {e.polygon}")
                bad = True
        if bad:
            structural = True
            continue
        if g.a == g.b:
            v.append(f"gluing {gi}: edge {tuple(g.a)} glued to itself")
            structural = True
            continue
        for e in (g.a, g.b):
            if e in used:
                v.append(f"gluing {gi}: edge {tuple(e)} already glued by gluing {used[e]}")
                structural = True
            used[e] = gi
        va = by_id[g.a.polygon].edge_vector(g.a.index)
        vb = by_id[g.b.polygon].edge_vector(g.b.index)
        want = -va if g.kind is GluingKind.TRANSLATION else va
        if vb != want:
            v.append(f"gluing {gi}: edge vectors mismatch for {g.kind.value} "
                     f"({tuple(g.a)} vs {tuple(g.b)})")
            structural = True
    if structural:
        return ValidationReport(tuple(v))

    # connectivity
    parent = {pid: pid for pid in ids}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in s.gluings:
        parent[find(g.a.polygon)] = find(g.b.polygon)
    if len({find(x) for x in ids}) > 1:
        v.append("surface is disconnected")

    try:
        cones = s.cones
    except AngleNotMultipleOfPi as exc:
        v.append(str(exc))
        return ValidationReport(tuple(v))
    for c in cones:
        if not c.on_boundary and c.k < 2:
            corner = c.corners[0]
            v.append(f"interior vertex class at ({corner.polygon}, {corner.vertex}) "
                     f"has angle {c.k}*pi < 2*pi")
    dirs = {Direction.of(s.polygon(e.polygon).edge_vector(e.index)) for e in s.boundary_edges()}
    if len(dirs) > 1:
        v.append("boundary is not of constant direction: "
                 + ", ".join(sorted(str(d) for d in dirs)))
    if not v and gauss_bonnet_defect(s) != 0:
        v.append("Gauss-Bonnet relation fails")
    return ValidationReport(tuple(v))


# ---------------------------------------------------------------------------
# triangulation


def _ear_clip(vertices: Sequence[Vec2]) -> list[tuple[int, int, int]]:
    idx = list(range(len(vertices)))
    tris = []
    guard = 0
    while len(idx) > 3:
        m = len(idx)
        for t in range(m):
            a, b, c = idx[t - 1], idx[t], idx[(t + 1) % m]
            pa, pb, pc = vertices[a], vertices[b], vertices[c]
            if orient(pa, pb, pc) <= 0:
                continue
            blocked = False
            for o in idx:
                if o in (a, b, c):
                    continue
                q = vertices[o]
                if orient(pa, pb, q) >= 0 and orient(pb, pc, q) >= 0 and orient(pc, pa, q) >= 0:
                    blocked = True
                    break
            if blocked:
                continue
            tris.append((a, b, c))
            idx.pop(t)
            break
        else:
            raise SurfaceError("ear clipping failed (polygon not simple?)")
        guard += 1
    tris.append(tuple(idx))
    return tris


def triangulate(s: HalfTranslationSurface, only_nonconvex: bool = False) -> HalfTranslationSurface:
    """Subdivide polygons into triangles glued along new diagonals by translation.

    Piece ids are ``"<polygon>#<n>"``; piece coordinates are those of the parent.
    """
    polys: list[Polygon] = []
    edge_map: dict[EdgeRef, EdgeRef] = {}
    new_gluings: list[Gluing] = []
    for p in s.polygons:
        if only_nonconvex and p.is_convex():
            polys.append(p)
            for i in range(len(p)):
                edge_map[EdgeRef(p.id, i)] = EdgeRef(p.id, i)
            continue
        n = len(p)
        tris = _ear_clip(p.vertices)
        sides: dict[tuple[int, int], EdgeRef] = {}
        for t, (a, b, c) in enumerate(tris):
            tid = f"{p.id}#{t}"
            polys.append(Polygon(tid, (p.vertices[a], p.vertices[b], p.vertices[c])))
            for k, (u, w) in enumerate(((a, b), (b, c), (c, a))):
                ref = EdgeRef(tid, k)
                if (w - u) % n == 1:
                    edge_map[EdgeRef(p.id, u)] = ref
                else:
                    sides[(u, w)] = ref
        for (u, w), ref in sides.items():
            if u < w:
                new_gluings.append(Gluing(ref, sides[(w, u)], GluingKind.TRANSLATION))
    gl = [Gluing(edge_map[g.a], edge_map[g.b], g.kind) for g in s.gluings]
    return HalfTranslationSurface(tuple(polys), tuple(gl + new_gluings))
