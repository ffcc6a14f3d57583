"""Standard surfaces and graphs, plus seeded random generators for tests."""

from __future__ import annotations

import random
from fractions import Fraction

from .ribbon import REFERENCE_GRAPHS, Edge, ExceptionalKind, RibbonGraph, ribbon_problems
from .surface import Gluing, GluingKind, HalfTranslationSurface, Polygon, validate_surface

UNIT = [(0, 0), (1, 0), (1, 1), (0, 1)]


def _rect(pid, x, y, w=1, h=1) -> Polygon:
    return Polygon(pid, [(x, y), (x + w, y), (x + w, y + h), (x, y + h)])


def square_torus() -> HalfTranslationSurface:
    return HalfTranslationSurface((Polygon("A", UNIT),),
                                  (Gluing(("A", 0), ("A", 2)), Gluing(("A", 1), ("A", 3))))


def l_surface() -> HalfTranslationSurface:
    """Three unit squares A (origin), B (right of A) and C (above A)."""
    polys = (_rect("A", 0, 0), _rect("B", 1, 0), _rect("C", 0, 1))
    glue = (
        Gluing(("A", 1), ("B", 3)), Gluing(("B", 1), ("A", 3)),
        Gluing(("C", 1), ("C", 3)), Gluing(("A", 2), ("C", 0)),
        Gluing(("C", 2), ("A", 0)), Gluing(("B", 2), ("B", 0)),
    )
    return HalfTranslationSurface(polys, glue)


def origami(right: list[int], up: list[int], w=1, h=1) -> HalfTranslationSurface:
    """Square-tiled translation surface from the right/up neighbour permutations."""
    n = len(right)
    w, h = Fraction(w), Fraction(h)
    polys = tuple(_rect(f"s{i}", 0, 0, w, h) for i in range(n))
    glue = []
    for i in range(n):
        glue.append(Gluing((f"s{i}", 1), (f"s{right[i]}", 3)))
        glue.append(Gluing((f"s{i}", 2), (f"s{up[i]}", 0)))
    return HalfTranslationSurface(polys, tuple(glue))


def _connected_perms(rng: random.Random, n: int):
    while True:
        r = list(range(n))
        u = list(range(n))
        rng.shuffle(r)
        rng.shuffle(u)
        seen, todo = {0}, [0]
        while todo:
            x = todo.pop()
            for y in (r[x], u[x]):
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        if len(seen) == n:
            return r, u


def random_rectangle_surface(rng: random.Random, max_tiles: int = 6) -> HalfTranslationSurface:
    """A valid closed surface glued from congruent rectangles.

    Half the time a translation surface (random connected origami); otherwise
    horizontal and vertical sides are matched at random, with same-side pairs
    glued by a flip, and the draw is repeated until the result is valid.
    """
    w = Fraction(rng.randint(1, 5), rng.randint(1, 4))
    h = Fraction(rng.randint(1, 5), rng.randint(1, 4))
    n = rng.randint(1, max_tiles)
    if rng.random() < 0.5:
        return origami(*_connected_perms(rng, n), w=w, h=h)
    while True:
        polys = tuple(_rect(f"r{i}", 0, 0, w, h) for i in range(n))
        glue = []
        for pair in ((0, 2), (1, 3)):
            sides = [(f"r{i}", k) for i in range(n) for k in pair]
            rng.shuffle(sides)
            for a, b in zip(sides[::2], sides[1::2]):
                kind = GluingKind.TRANSLATION if a[1] != b[1] else GluingKind.FLIP
                glue.append(Gluing(a, b, kind))
        s = HalfTranslationSurface(polys, tuple(glue))
        if validate_surface(s).ok:
            return s


def nonplanar_theta() -> RibbonGraph:
    return RibbonGraph(("u", "v"), tuple(Edge(e, ("u", "v")) for e in "abc"),
                       {"u": ("a+", "b+", "c+"), "v": ("a-", "b-", "c-")})


def interleaved_rose() -> RibbonGraph:
    return RibbonGraph(("u",), (Edge("a", ("u", "u")), Edge("b", ("u", "u"))),
                       {"u": ("a+", "b+", "a-", "b-")})


def reference_graph(kind: ExceptionalKind) -> RibbonGraph:
    return REFERENCE_GRAPHS[kind]


def random_ribbon_graph(rng: random.Random, max_edges: int = 8) -> RibbonGraph:
    """Connected ribbon graph with valences in 2..5 and at most max_edges edges."""
    while True:
        e = rng.randint(1, max_edges)
        degrees = []
        left = 2 * e
        while left > 0:
            d = rng.randint(2, 5)
            if left - d in (1,) or d > left:
                d = left if left <= 5 else 2
            degrees.append(d)
            left -= d
        slots = [(f"v{i}", j) for i, d in enumerate(degrees) for j in range(d)]
        rng.shuffle(slots)
        edges, order = [], {f"v{i}": [None] * d for i, d in enumerate(degrees)}
        for k in range(e):
            (va, ia), (vb, ib) = slots[2 * k], slots[2 * k + 1]
            name = f"e{k}"
            edges.append(Edge(name, (va, vb), Fraction(rng.randint(1, 3))))
            order[va][ia] = f"{name}+"
            order[vb][ib] = f"{name}-"
        g = RibbonGraph(tuple(order), tuple(edges), {v: tuple(hs) for v, hs in order.items()})
        if not ribbon_problems(g):
            return g
