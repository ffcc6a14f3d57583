"""Randomised invariants (hypothesis drives the seeds and the choices)."""

import json
import random
from collections import Counter

from hypothesis import assume, given
from hypothesis import strategies as st

from flatlam import io as fio
from flatlam.exact import Direction, Vec2
from flatlam.fixtures import l_surface, random_rectangle_surface, random_ribbon_graph
from flatlam.flow import Outcome, cylinder_decomposition, maximal_cylinder
from flatlam.lamination import LeafFamily, classify_components, family_from_direction
from flatlam.ribbon import build_surface, right_turn_cycles, surface_invariants
from flatlam.surface import (
    Gluing,
    HalfTranslationSurface,
    Polygon,
    compute_singularities,
    euler_characteristic,
    validate_surface,
)
from flatlam.tracer import SurfacePoint, Termination, saddle_connections, shoot

seeds = st.integers(0, 10**6)
small = st.integers(-4, 4)
directions = st.tuples(small, small).filter(lambda v: v != (0, 0))
inner = st.fractions(0, 1).filter(lambda x: 0 < x < 1)


def surface(seed, tiles=4):
    return random_rectangle_surface(random.Random(seed), tiles)


def relabel_and_rotate(s: HalfTranslationSurface, rng) -> HalfTranslationSurface:
    names = {p.id: f"q{i}" for i, p in enumerate(s.polygons)}
    shift = {p.id: rng.randrange(len(p.vertices)) for p in s.polygons}
    polys = []
    for p in s.polygons:
        r = shift[p.id]
        polys.append(Polygon(names[p.id], p.vertices[r:] + p.vertices[:r]))
    rng.shuffle(polys)

    def edge(e):
        n = len(s.polygon(e.polygon).vertices)
        return (names[e.polygon], (e.index - shift[e.polygon]) % n)
    glue = tuple(Gluing(edge(g.a), edge(g.b), g.kind) for g in s.gluings)
    return HalfTranslationSurface(tuple(polys), glue)


def interior_point(s, fx, fy):
    p = s.polygons[0]
    xs = [v.x for v in p.vertices]
    ys = [v.y for v in p.vertices]
    x = min(xs) + fx * (max(xs) - min(xs))
    y = min(ys) + fy * (max(ys) - min(ys))
    return SurfacePoint(p.id, Vec2(x, y))


@given(seeds)
def test_gauss_bonnet(seed):
    s = surface(seed, 6)
    assert validate_surface(s).ok
    total = sum(c.k - 2 for c in compute_singularities(s))
    assert total == -2 * euler_characteristic(s)


@given(seeds, seeds)
def test_singularities_invariant_under_relabel(seed, seed2):
    s = surface(seed)
    t = relabel_and_rotate(s, random.Random(seed2))
    assert validate_surface(t).ok
    assert sorted(c.k for c in compute_singularities(s)) == \
        sorted(c.k for c in compute_singularities(t))
    assert euler_characteristic(s) == euler_characteristic(t)


@given(directions, st.integers(1, 5))
def test_direction_ignores_sign_and_scale(v, m):
    d = Direction.of(v)
    assert d == Direction.of((-v[0], -v[1])) == Direction.of((m * v[0], m * v[1]))
    assert d.x > 0 or (d.x == 0 and d.y > 0)


@given(seeds, directions, inner, inner)
def test_developed_path_conserves_holonomy(seed, d, fx, fy):
    s = surface(seed)
    t = shoot(s, interior_point(s, fx, fy), d, 30)
    assume(t.segments)
    segs = t.segments
    for a, b in zip(segs, segs[1:]):
        assert a.develop(a.end) == b.develop(b.start)
    total = sum((seg.holonomy * seg.sign for seg in segs), Vec2.of(0, 0))
    assert total == t.holonomy
    assert segs[-1].develop(segs[-1].end) - segs[0].develop(segs[0].start) == t.holonomy


@given(seeds, directions, inner, inner)
def test_reversal_reverses_itinerary(seed, d, fx, fy):
    s = surface(seed)
    t = shoot(s, interior_point(s, fx, fy), d, 30)
    assume(t.termination is Termination.CLOSED and not t.flipped)
    back = shoot(s, t.start, -t.direction, t.sq_length)
    assert back.termination is Termination.CLOSED
    assert back.sq_length == t.sq_length
    conv = s.convex

    def glued_pairs(traj):
        return Counter(frozenset((e, conv.partner(e)[0])) for e in traj.crossings)
    assert glued_pairs(back) == glued_pairs(t)


@given(seeds)
def test_connections_come_in_reversed_pairs(seed):
    s = surface(seed, 3)
    oriented = saddle_connections(s, 5, oriented=True)
    keys = {sc.key() for sc in oriented}
    assert keys == {sc.reverse_key() for sc in oriented}
    for sc in oriented:
        assert Direction.of(sc.holonomy) == Direction.of(sc.end_holonomy)


@given(seeds, st.sampled_from([(1, 0), (0, 1), (1, 1), (1, -1), (2, 1)]))
def test_periodic_area_is_conserved(seed, d):
    s = surface(seed, 3)
    dec = cylinder_decomposition(s, d, 200)
    if dec.outcome is Outcome.PERIODIC:
        assert dec.total_area == s.area()
    else:
        assert dec.total_area < s.area()


@given(seeds)
def test_maximal_cylinder_idempotent(seed):
    s = surface(seed, 3)
    dec = cylinder_decomposition(s, (1, 0), 200)
    for cyl in dec.cylinders:
        assert maximal_cylinder(s, cyl.core) == cyl


@given(seeds)
def test_random_ribbon_graphs(seed):
    g = random_ribbon_graph(random.Random(seed), 6)
    chi, b, genus = surface_invariants(g)
    assert genus >= 0
    assert chi == len(g.vertices) - len(g.edges)
    assert sum(len(c.half_edges) for c in right_turn_cycles(g)) == 2 * len(g.edges)
    s = build_surface(g)
    assert validate_surface(s).ok
    assert euler_characteristic(s) == chi


@given(seeds)
def test_surface_json_round_trip(seed):
    s = surface(seed)
    assert fio.surface_from_json(json.loads(fio.dumps(fio.surface_to_json(s)))) == s


@given(st.randoms(use_true_random=False))
def test_classification_ignores_leaf_order(rnd):
    L = l_surface()
    fam = family_from_direction(L, (1, 1), 100)
    prim = [lf.geodesic for lf in fam.primary]
    rnd.shuffle(prim)
    fam2 = LeafFamily.of(L, prim)
    assert classify_components(L, fam).lines() == classify_components(L, fam2).lines()
