"""Germs of rays at vertex classes and their cyclic order.

A germ is stored as (cone, corner, primitive direction in that corner's
polygon frame).  Directions lying on the closing ray of a corner are moved to
the opening ray of the next corner, so equal germs compare equal.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from .exact import Vec2, primitive, rel_diamond, same_ray
from .surface import ConePoint, HalfTranslationSurface, SurfaceError


class GermsAtDifferentCones(SurfaceError):
    pass


class Germ(NamedTuple):
    cone: int
    corner: int
    dir: tuple[int, int]

    def vec(self) -> Vec2:
        return Vec2(Fraction(self.dir[0]), Fraction(self.dir[1]))


def make_germ(s: HalfTranslationSurface, cone: ConePoint, corner: int, v) -> Germ:
    """Canonical germ for direction ``v`` (frame of ``corner``), which must lie in its sector."""
    c = cone.corners[corner]
    span = rel_diamond(c.start, c.end)
    r = rel_diamond(c.start, v)
    if r > span:
        raise SurfaceError(f"direction {tuple(v)} is outside corner {corner} of cone {cone.index}")
    if r == span and not (cone.on_boundary and corner == len(cone) - 1):
        nxt = (corner + 1) % len(cone)
        return Germ(cone.index, nxt, primitive(cone.corners[nxt].start))
    return Germ(cone.index, corner, primitive(v))


def germ_at_corner(s: HalfTranslationSurface, polygon: str, vertex: int, v) -> Germ:
    """Germ leaving corner (polygon, vertex) in local direction ``v``."""
    cone_i, c = s.corner_index[(polygon, vertex % len(s.polygon(polygon)))]
    return make_germ(s, s.cones[cone_i], c, v)


def germ_in_sector(s: HalfTranslationSurface, polygon: str, vertex: int, v) -> bool:
    cone_i, c = s.corner_index[(polygon, vertex % len(s.polygon(polygon)))]
    corner = s.cones[cone_i].corners[c]
    return rel_diamond(corner.start, v) <= rel_diamond(corner.start, corner.end)


def position(s: HalfTranslationSurface, g: Germ) -> tuple[int, Fraction]:
    """Sort key of a germ along the link of its cone."""
    corner = s.cones[g.cone].corners[g.corner]
    return g.corner, rel_diamond(corner.start, g.dir)


def _step(s: HalfTranslationSurface, g: Germ, sense: int) -> Germ | None:
    cone = s.cones[g.cone]
    n = len(cone)
    c = g.corner
    d = g.vec()
    target = -d
    corner = cone.corners[c]
    if sense > 0:
        if rel_diamond(d, corner.end) >= 2:
            return make_germ(s, cone, c, target)
        for _ in range(2 * n + 2):
            if cone.on_boundary and c == n - 1:
                return None
            target = target * cone.link_signs[c]
            c = (c + 1) % n
            corner = cone.corners[c]
            if rel_diamond(corner.start, target) <= rel_diamond(corner.start, corner.end):
                return make_germ(s, cone, c, target)
    else:
        if rel_diamond(corner.start, target) <= rel_diamond(corner.start, d) and target != d:
            return make_germ(s, cone, c, target)
        for _ in range(2 * n + 2):
            if cone.on_boundary and c == 0:
                return None
            c = (c - 1) % n
            target = target * cone.link_signs[c]
            corner = cone.corners[c]
            if rel_diamond(corner.start, target) <= rel_diamond(corner.start, corner.end):
                return make_germ(s, cone, c, target)
    raise SurfaceError("half-turn rotation did not terminate")


def rotate(s: HalfTranslationSurface, g: Germ, halfturns: int) -> Germ | None:
    """Germ at angle ``halfturns * pi`` counterclockwise from ``g`` (None past a boundary)."""
    sense = 1 if halfturns >= 0 else -1
    for _ in range(abs(halfturns)):
        g = _step(s, g, sense)
        if g is None:
            return None
    return g


def _unwrapped(s, base: Germ, g: Germ):
    pb, pg = position(s, base), position(s, g)
    return (0 if pg >= pb else 1, pg)


def ccw_angle_at_least(s: HalfTranslationSurface, g1: Germ, g2: Germ, halfturns: int) -> bool:
    """Is the counterclockwise angle from g1 to g2 at least ``halfturns * pi``?

    For boundary cones an arc that has to cross the boundary gap is treated
    as infinitely wide (no shortcut exists through the outside).
    """
    if g1.cone != g2.cone:
        raise GermsAtDifferentCones("germs at different cones")
    cone = s.cones[g1.cone]
    if cone.on_boundary and position(s, g2) < position(s, g1):
        return True
    if g1 == g2:
        return halfturns <= 0
    if not cone.on_boundary and halfturns >= cone.k:
        return False
    g = rotate(s, g1, halfturns)
    if g is None:
        return True
    return _unwrapped(s, g1, g) <= _unwrapped(s, g1, g2)


def is_legal_transition(s: HalfTranslationSurface, incoming: Germ, outgoing: Germ) -> bool:
    """Both angles between the arriving germ and the leaving germ are >= pi."""
    if incoming == outgoing:
        return False
    return (ccw_angle_at_least(s, incoming, outgoing, 1)
            and ccw_angle_at_least(s, outgoing, incoming, 1))


def cyclic_order(s: HalfTranslationSurface, a: Germ, b: Germ, c: Germ) -> int:
    """Orientation-induced cyclic order of three germs at one cone: -1, 0 or 1."""
    if not (a.cone == b.cone == c.cone):
        raise GermsAtDifferentCones("germs at different cones")
    if a == b or b == c or a == c:
        return 0
    pa, pb, pc = position(s, a), position(s, b), position(s, c)
    # (a, b, c) is counterclockwise iff it is a rotation of the sorted triple
    if (pa < pb < pc) or (pb < pc < pa) or (pc < pa < pb):
        return 1
    return -1


def straight_continuation(s: HalfTranslationSurface, incoming: Germ) -> Germ | None:
    return rotate(s, incoming, 1)


def germ_is_parallel(g: Germ, v) -> bool:
    return same_ray(g.vec(), v)
