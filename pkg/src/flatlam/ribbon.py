"""Cyclically ordered graphs and the cylinder gluing that thickens them.

Half-edges are named ``"<edge>+"`` (at ``ends[0]``) and ``"<edge>-"`` (at
``ends[1]``).  The cyclic order at a vertex lists its half-edges
counterclockwise.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .exact import Q
from .surface import Gluing, GluingKind, HalfTranslationSurface, Polygon


class RibbonGraphError(ValueError):
    pass


class NonIntegralGenus(RibbonGraphError):
    pass


class CrossCheckMismatch(RuntimeError):
    pass


@dataclass(frozen=True)
class Edge:
    id: str
    ends: tuple[str, str]
    length: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "ends", tuple(self.ends))
        object.__setattr__(self, "length", Q(self.length))


def opposite(h: str) -> str:
    return h[:-1] + ("-" if h.endswith("+") else "+")


def edge_of(h: str) -> str:
    return h[:-1]


@dataclass(frozen=True)
class RibbonGraph:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    cyclic_order: Mapping[str, tuple[str, ...]]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "cyclic_order",
                           {v: tuple(hs) for v, hs in dict(self.cyclic_order).items()})

    def __hash__(self):
        return hash((self.vertices, self.edges, tuple(sorted(self.cyclic_order.items()))))

    @property
    def half_edges(self) -> list[str]:
        return [f"{e.id}{s}" for e in self.edges for s in "+-"]

    def vertex_of(self, h: str) -> str:
        e = self._edges[edge_of(h)]
        return e.ends[0] if h.endswith("+") else e.ends[1]

    @property
    def _edges(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    def length(self, h: str) -> Fraction:
        return self._edges[edge_of(h)].length

    def succ(self, h: str) -> str:
        order = self.cyclic_order[self.vertex_of(h)]
        return order[(order.index(h) + 1) % len(order)]

    def valence(self, v: str) -> int:
        return len(self.cyclic_order.get(v, ()))

    def mirror(self) -> "RibbonGraph":
        """Same graph with every cyclic order reversed."""
        return RibbonGraph(self.vertices, self.edges,
                           {v: tuple(reversed(hs)) for v, hs in self.cyclic_order.items()})


def ribbon_problems(g: RibbonGraph) -> list[str]:
    out = []
    if len(set(g.vertices)) != len(g.vertices):
        out.append("duplicate vertex names")
    ids = [e.id for e in g.edges]
    if len(set(ids)) != len(ids):
        out.append("duplicate edge ids")
    for e in g.edges:
        for v in e.ends:
            if v not in g.vertices:
                out.append(f"edge {e.id}: unknown vertex {v!r}")
        if e.length <= 0:
            out.append(f"edge {e.id}: length must be positive")
    if out:
        return out
    for v in g.vertices:
        want = sorted(h for h in g.half_edges if g.vertex_of(h) == v)
        got = list(g.cyclic_order.get(v, ()))
        if sorted(got) != want:
            out.append(f"vertex {v}: cyclic order must list exactly its half-edges {want}")
        if len(want) < 2:
            out.append(f"vertex {v}: terminal or isolated vertex (valence {len(want)})")
    if not g.edges:
        out.append("graph has no edges")
        return out
    parent = {v: v for v in g.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in g.edges:
        parent[find(e.ends[0])] = find(e.ends[1])
    if len({find(v) for v in g.vertices}) > 1:
        out.append("graph is disconnected")
    return out


def check_ribbon(g: RibbonGraph) -> RibbonGraph:
    problems = ribbon_problems(g)
    if problems:
        raise RibbonGraphError("; ".join(problems))
    return g


@dataclass(frozen=True)
class RightTurnCycle:
    half_edges: tuple[str, ...]
    length: Fraction


def right_turn_cycles(g: RibbonGraph) -> list[RightTurnCycle]:
    """Orbits of h -> succ(opposite(h)), each starting at its least half-edge."""
    check_ribbon(g)
    todo = sorted(g.half_edges)
    done: set[str] = set()
    cycles = []
    for h0 in todo:
        if h0 in done:
            continue
        seq = []
        h = h0
        while h not in done:
            done.add(h)
            seq.append(h)
            h = g.succ(opposite(h))
        cycles.append(RightTurnCycle(tuple(seq), sum((g.length(x) for x in seq), Fraction(0))))
    return cycles


def surface_invariants(g: RibbonGraph) -> tuple[int, int, int]:
    """(chi, number of boundary components, genus) of the thickened graph."""
    chi = len(g.vertices) - len(g.edges)
    b = len(right_turn_cycles(g))
    g2 = 2 - chi - b
    if g2 < 0 or g2 % 2:
        raise NonIntegralGenus(f"genus ({g2}/2) is not a non-negative integer")
    return chi, b, g2 // 2


def build_surface(g: RibbonGraph) -> HalfTranslationSurface:
    """Glue a height-1 flat cylinder along each right-turn cycle.

    Cycle ``i`` becomes the rectangle ``cyc<i>`` of size L x 1.  Its bottom is
    cut into one segment per traversed half-edge, laid out right to left so
    that the counterclockwise order at each vertex is the given cyclic order.
    Bottom segments of opposite half-edges are glued by a flip, the vertical
    sides by a translation and the top stays boundary.
    """
    cycles = right_turn_cycles(g)
    polygons = []
    slot: dict[str, tuple[str, int]] = {}
    gluings = []
    for ci, cyc in enumerate(cycles):
        pid = f"cyc{ci}"
        m = len(cyc.half_edges)
        xs = [Fraction(0)]
        for h in reversed(cyc.half_edges):
            xs.append(xs[-1] + g.length(h))
        L = xs[-1]
        verts = [(x, 0) for x in xs] + [(L, 1), (0, 1)]
        polygons.append(Polygon(pid, verts))
        for i, h in enumerate(cyc.half_edges):
            slot[h] = (pid, m - 1 - i)
        gluings.append(Gluing((pid, m), (pid, m + 2), GluingKind.TRANSLATION))
    for e in g.edges:
        gluings.append(Gluing(slot[f"{e.id}+"], slot[f"{e.id}-"], GluingKind.FLIP))
    return HalfTranslationSurface(tuple(polygons), tuple(gluings))


# ---------------------------------------------------------------------------
# exceptional graphs


class ExceptionalKind(enum.Enum):
    CIRCLE = "Circle"
    DUMBBELL = "Dumbbell"
    FLAT_EIGHT = "FlatEight"
    FLAT_THETA = "FlatTheta"
    NONE = "None"


def _map(g: RibbonGraph):
    """Combinatorial map (sigma, alpha) on half-edges."""
    sigma = {h: g.succ(h) for h in g.half_edges}
    alpha = {h: opposite(h) for h in g.half_edges}
    return sigma, alpha


def _suppress_valence_two(sigma: dict, alpha: dict):
    sigma, alpha = dict(sigma), dict(alpha)
    changed = True
    while changed:
        changed = False
        for x in list(sigma):
            y = sigma[x]
            if y == x or sigma[y] != x:
                continue
            xo, yo = alpha[x], alpha[y]
            if xo == y:
                continue  # a lone loop at a valence-2 vertex: a circle
            for h in (x, y):
                del sigma[h], alpha[h]
            alpha[xo], alpha[yo] = yo, xo
            changed = True
            break
    return sigma, alpha


def _is_circle(sigma) -> bool:
    return all(sigma[sigma[h]] == h and sigma[h] != h for h in sigma)


def _isomorphic(m1, m2) -> bool:
    s1, a1 = m1
    s2, a2 = m2
    if len(s1) != len(s2):
        return False
    if not s1:
        return True
    d0 = min(s1)
    for target in sorted(s2):
        f = {d0: target}
        stack = [d0]
        ok = True
        while stack and ok:
            x = stack.pop()
            for p1, p2 in ((s1, s2), (a1, a2)):
                y, fy = p1[x], p2[f[x]]
                if y in f:
                    if f[y] != fy:
                        ok = False
                        break
                else:
                    f[y] = fy
                    stack.append(y)
        if ok and len(set(f.values())) == len(f) == len(s1):
            return True
    return False


def _graph(vertices, edges, order) -> RibbonGraph:
    return RibbonGraph(tuple(vertices), tuple(Edge(e, ends) for e, ends in edges), order)


REFERENCE_GRAPHS: dict[ExceptionalKind, RibbonGraph] = {
    ExceptionalKind.CIRCLE: _graph(["u", "v"], [("a", ("u", "v")), ("b", ("v", "u"))],
                                   {"u": ("a+", "b-"), "v": ("a-", "b+")}),
    ExceptionalKind.DUMBBELL: _graph(
        ["u", "v"], [("a", ("u", "u")), ("b", ("u", "v")), ("c", ("v", "v"))],
        {"u": ("a+", "a-", "b+"), "v": ("b-", "c+", "c-")}),
    ExceptionalKind.FLAT_EIGHT: _graph(
        ["u"], [("a", ("u", "u")), ("b", ("u", "u"))], {"u": ("a+", "a-", "b+", "b-")}),
    ExceptionalKind.FLAT_THETA: _graph(
        ["u", "v"], [("a", ("u", "v")), ("b", ("u", "v")), ("c", ("u", "v"))],
        {"u": ("a+", "b+", "c+"), "v": ("c-", "b-", "a-")}),
}


def isomorphism_kind(g: RibbonGraph) -> ExceptionalKind:
    """Match g (lengths ignored, valence-2 vertices suppressed) against the references."""
    check_ribbon(g)
    sigma, alpha = _suppress_valence_two(*_map(g))
    if _is_circle(sigma):
        return ExceptionalKind.CIRCLE
    for kind, ref in REFERENCE_GRAPHS.items():
        if kind is ExceptionalKind.CIRCLE:
            continue
        for variant in (ref, ref.mirror()):
            if _isomorphic((sigma, alpha), _suppress_valence_two(*_map(variant))):
                return kind
    return ExceptionalKind.NONE


def is_exceptional(g: RibbonGraph) -> ExceptionalKind:
    """Exceptional class of g, cross-checked against the thickened surface."""
    kind = isomorphism_kind(g)
    chi, b, _genus = surface_invariants(g)
    by_surface = chi == 0 or (chi == -1 and b == 3)
    if by_surface != (kind is not ExceptionalKind.NONE):
        raise CrossCheckMismatch(
            f"isomorphism test says {kind.value}, surface invariants say (chi={chi}, b={b})")
    return kind


def bouquet_bound(genus: int, b: int, n: int) -> bool:
    """n <= 6g + 3b - 3."""
    if genus < 0 or b < 0 or n < 1:
        raise ValueError("need genus >= 0, b >= 0, n >= 1")
    return n <= 6 * genus + 3 * b - 3


def arc_bound(genus: int, b: int, n: int) -> bool:
    """n <= 6g + 3b - 2 (families of arcs between two marked points)."""
    if genus < 0 or b < 0 or n < 1:
        raise ValueError("need genus >= 0, b >= 0, n >= 1")
    return n <= 6 * genus + 3 * b - 2


def ribbon_graph(vertices: Sequence[str], edges: Sequence, cyclic_order: Mapping) -> RibbonGraph:
    """Convenience constructor; edges are Edge objects or (id, (u, v)[, length])."""
    es = []
    for e in edges:
        es.append(e if isinstance(e, Edge) else Edge(*e))
    return check_ribbon(RibbonGraph(tuple(vertices), tuple(es), cyclic_order))
