"""JSON formats for surfaces, ribbon graphs, geodesics and trajectories.

Rationals are written as ``"p/q"`` strings (``"p"`` for integers).  Readers
raise :class:`ParseError` with a JSONPath-like location.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .cones import germ_at_corner, germ_in_sector
from .exact import Q, Vec2, format_rational
from .linking import ClosedGeodesic, regular_geodesic, saddle_geodesic
from .ribbon import Edge, RibbonGraph
from .surface import EdgeRef, Gluing, GluingKind, HalfTranslationSurface, Polygon
from .tracer import SurfacePoint, Trajectory, saddle_connection_from_germ, shoot


class ParseError(ValueError):
    def __init__(self, message: str, location: str = "$"):
        super().__init__(f"{location}: {message}")
        self.location = location


def _rat(x, loc) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise ParseError("expected a rational as \"p/q\" string or integer", loc)
    try:
        return Q(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {x!r} ({exc})", loc) from None


def _vec(x, loc) -> Vec2:
    if not isinstance(x, list) or len(x) != 2:
        raise ParseError("expected a pair of rationals", loc)
    return Vec2(_rat(x[0], f"{loc}[0]"), _rat(x[1], f"{loc}[1]"))


def _get(obj, key, loc, kind=None):
    if not isinstance(obj, dict):
        raise ParseError("expected an object", loc)
    if key not in obj:
        raise ParseError(f"missing key {key!r}", loc)
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        raise ParseError(f"{key!r} has the wrong type", f"{loc}.{key}")
    return val


def vec_json(v) -> list[str]:
    return [format_rational(Q(v[0])), format_rational(Q(v[1]))]


def loads(text: str, what: str = "document") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {what}: {exc.msg}", f"line {exc.lineno} col {exc.colno}") from None


# ---------------------------------------------------------------------------
# surfaces


def surface_from_json(data) -> HalfTranslationSurface:
    polys = []
    for i, p in enumerate(_get(data, "polygons", "$", list)):
        loc = f"$.polygons[{i}]"
        pid = _get(p, "id", loc, str)
        verts = _get(p, "vertices", loc, list)
        polys.append(Polygon(pid, tuple(_vec(v, f"{loc}.vertices[{j}]") for j, v in enumerate(verts))))
    gluings = []
    for i, g in enumerate(data.get("gluings", []) if isinstance(data, dict) else []):
        loc = f"$.gluings[{i}]"
        ends = []
        for key in ("a", "b"):
            e = _get(g, key, loc, list)
            if len(e) != 2 or not isinstance(e[0], str) or isinstance(e[1], bool) \
                    or not isinstance(e[1], int):
                raise ParseError("edge reference must be [polygon id, edge index]", f"{loc}.{key}")
            ends.append(EdgeRef(e[0], e[1]))
        kind = g.get("kind", "translation")
        try:
            kind = GluingKind(kind)
        except ValueError:
            raise ParseError(f"unknown gluing kind {kind!r}", f"{loc}.kind") from None
        gluings.append(Gluing(ends[0], ends[1], kind))
    return HalfTranslationSurface(tuple(polys), tuple(gluings))


def surface_to_json(s: HalfTranslationSurface) -> dict:
    return {
        "polygons": [{"id": p.id, "vertices": [vec_json(v) for v in p.vertices]}
                     for p in s.polygons],
        "gluings": [{"a": [g.a.polygon, g.a.index], "b": [g.b.polygon, g.b.index],
                     "kind": g.kind.value} for g in s.gluings],
    }


# ---------------------------------------------------------------------------
# ribbon graphs


def graph_from_json(data) -> RibbonGraph:
    verts = _get(data, "vertices", "$", list)
    edges = []
    for i, e in enumerate(_get(data, "edges", "$", list)):
        loc = f"$.edges[{i}]"
        ends = _get(e, "ends", loc, list)
        if len(ends) != 2:
            raise ParseError("an edge has exactly two ends", f"{loc}.ends")
        length = _rat(e.get("length", "1"), f"{loc}.length")
        edges.append(Edge(_get(e, "id", loc, str), (ends[0], ends[1]), length))
    order = _get(data, "cyclic_order", "$", dict)
    return RibbonGraph(tuple(verts), tuple(edges), {v: tuple(hs) for v, hs in order.items()})


def graph_to_json(g: RibbonGraph) -> dict:
    return {
        "vertices": list(g.vertices),
        "edges": [{"id": e.id, "ends": list(e.ends), "length": format_rational(e.length)}
                  for e in g.edges],
        "cyclic_order": {v: list(g.cyclic_order[v]) for v in g.vertices},
    }


# ---------------------------------------------------------------------------
# geodesics


def point_from_json(p, loc) -> SurfacePoint:
    return SurfacePoint(_get(p, "polygon", loc, str), _vec(_get(p, "coords", loc), f"{loc}.coords"))


def _vertex_germ(s: HalfTranslationSurface, pid: str, vertex: int, v: Vec2, loc):
    """Germ leaving vertex ``vertex`` of (original) polygon ``pid`` along ``v``."""
    conv = s.convex
    try:
        corner_pt = s.polygon(pid).vertex(vertex)
    except Exception:
        raise ParseError(f"unknown polygon {pid!r}", loc) from None
    for piece in s.piece_of.get(pid, [pid]):
        poly = conv.polygon(piece)
        for j, w in enumerate(poly.vertices):
            if w == corner_pt and germ_in_sector(conv, piece, j, v):
                return germ_at_corner(conv, piece, j, v)
    raise ParseError("direction does not point into the polygon at that vertex", loc)


def geodesic_from_json(s: HalfTranslationSurface, data, loc="$") -> ClosedGeodesic:
    kind = data.get("kind", "regular") if isinstance(data, dict) else None
    if kind == "regular":
        start = point_from_json(_get(data, "start", loc), f"{loc}.start")
        d = _vec(_get(data, "direction", loc), f"{loc}.direction")
        budget = _rat(data.get("max_sq_length", "10000"), f"{loc}.max_sq_length")
        t = shoot(s, start, d, budget)
        cert = data.get("itinerary")
        if cert is not None and list(t.itinerary()) != list(cert):
            raise ParseError("closure certificate does not match the traced itinerary",
                             f"{loc}.itinerary")
        try:
            return regular_geodesic(s, t)
        except ValueError as exc:
            raise ParseError(str(exc), loc) from None
    if kind == "saddle":
        scs = []
        for i, leg in enumerate(_get(data, "legs", loc, list)):
            lloc = f"{loc}.legs[{i}]"
            hol = _vec(_get(leg, "holonomy", lloc), f"{lloc}.holonomy")
            g = _vertex_germ(s, _get(leg, "polygon", lloc, str), _get(leg, "vertex", lloc, int),
                             hol, lloc)
            try:
                scs.append(saddle_connection_from_germ(s, g, hol))
            except ValueError as exc:
                raise ParseError(str(exc), lloc) from None
        try:
            return saddle_geodesic(s, scs)
        except ValueError as exc:
            raise ParseError(str(exc), loc) from None
    raise ParseError("geodesic kind must be \"regular\" or \"saddle\"", f"{loc}.kind")


def family_from_json(s: HalfTranslationSurface, data) -> list[ClosedGeodesic]:
    leaves = _get(data, "leaves", "$", list)
    return [geodesic_from_json(s, leaf, f"$.leaves[{i}]") for i, leaf in enumerate(leaves)]


def trajectory_lines(t: Trajectory) -> list[str]:
    """One JSON object per segment (JSON lines)."""
    out = []
    for seg in t.segments:
        out.append(json.dumps({
            "polygon": seg.polygon,
            "entry": vec_json(seg.start),
            "exit": vec_json(seg.end),
            "holonomy": vec_json(seg.holonomy),
        }, sort_keys=True))
    return out


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"
