import itertools
import random
from math import gcd

import pytest

from flatlam.cones import germ_at_corner
from flatlam.exact import Vec2
from flatlam.fixtures import l_surface, reference_graph
from flatlam.linking import (
    DifferentSurfaces,
    EventKind,
    FamilyIsLinked,
    GermsAtDifferentCones,
    are_linked,
    check_family_bounds,
    family_ceiling,
    germ_cyclic_order,
    intersection_pattern,
    is_self_linked,
    regular_geodesic,
    saddle_geodesic,
)
from flatlam.ribbon import ExceptionalKind, build_surface, ribbon_graph
from flatlam.surface import compute_singularities
from flatlam.tracer import MalformedPath, SurfacePoint, iter_germs, saddle_connection_from_germ, shoot
from oracles import (
    L_NAMES,
    L_RIGHT,
    L_UP,
    LL,
    LR,
    UL,
    UR,
    Origami,
    cyclic_sign,
    homology_of,
    intersection,
    shared_arc_linked,
)

# unit horizontal (s) and vertical (t) connections of the L-shaped surface,
# as (polygon, vertex, direction) of their start
LEGS = {
    "s1": ("C", 0, (1, 0)), "s2": ("A", 0, (1, 0)), "s3": ("B", 0, (1, 0)),
    "t1": ("A", 0, (0, 1)), "t2": ("A", 1, (0, 1)), "t3": ("C", 0, (0, 1)),
}
E, W, N, S = (1, 0), (-1, 0), (0, 1), (0, -1)
A, B, C = 0, 1, 2


@pytest.fixture(scope="module")
def Lc():
    return l_surface()


def leg(s, name, sign=1):
    p, v, d = LEGS[name]
    sc = saddle_connection_from_germ(s, germ_at_corner(s.convex, p, v, d), d)
    return sc if sign > 0 else sc.reversed(s)


def chain(s, seq):
    return saddle_geodesic(s, [leg(s, *x) for x in seq])


def torus_loop(torus, d, at=("1/7", "2/9")):
    return regular_geodesic(torus, shoot(torus, SurfacePoint("A", Vec2.of(*at)), d, 100))


# ---------------------------------------------------------------------------
# torus


def _classes():
    out = []
    for p in range(0, 4):
        for q in range(-3, 4):
            if gcd(p, q) == 1 and (p > 0 or q > 0):
                out.append((p, q))
    return out


def test_torus_pairs(torus):
    loops1 = {c: torus_loop(torus, c) for c in _classes()}
    loops2 = {c: torus_loop(torus, c, ("3/5", "1/11")) for c in _classes()}
    for a, b in itertools.product(_classes(), repeat=2):
        parallel = a[0] * b[1] - a[1] * b[0] == 0
        assert are_linked(loops1[a], loops2[b]) is (not parallel), (a, b)


def test_torus_transverse_count(torus):
    a = torus_loop(torus, (1, 0))
    b = torus_loop(torus, (1, 2), ("3/5", "1/11"))
    pat = intersection_pattern(a, b)
    assert len(pat) == 2
    assert all(e.kind is EventKind.TRANSVERSE_REGULAR for e in pat)


def test_same_loop_is_same_image(torus):
    a = torus_loop(torus, (1, 1))
    pat = intersection_pattern(a, a.reversed())
    assert pat.same_image and not pat.linked
    assert not is_self_linked(a)


def test_different_surfaces_rejected(torus, Lc):
    with pytest.raises(DifferentSurfaces):
        are_linked(torus_loop(torus, (1, 0)), chain(Lc, [("s1", 1)]))


# ---------------------------------------------------------------------------
# cyclic order axioms


def _fivefold():
    return ribbon_graph(["u", "v"], [("a", ("u", "v")), ("b", ("u", "v")), ("c", ("u", "v")),
                                     ("d", ("u", "u"))],
                        {"u": ("a+", "b+", "c+", "d+", "d-"), "v": ("c-", "b-", "a-")})


def _cone_cases():
    L = l_surface()
    cases = [
        (build_surface(reference_graph(ExceptionalKind.FLAT_THETA)), 3),
        (build_surface(reference_graph(ExceptionalKind.FLAT_EIGHT)), 4),
        (build_surface(_fivefold()), 5),
        (L, 6),
    ]
    return cases


@pytest.mark.parametrize("surface,k", _cone_cases(), ids=["k3", "k4", "k5", "k6"])
def test_cyclic_order_axioms(surface, k):
    cones = [c for c in compute_singularities(surface) if c.k == k]
    assert cones
    idx = cones[0].index
    germs = [g for g in iter_germs(surface, [(1, 0), (0, 1), (1, 1), (1, -1)]) if g.cone == idx]
    germs = germs[:14]
    assert len(germs) >= 6
    o = {}
    for x, y, z in itertools.product(germs, repeat=3):
        v = germ_cyclic_order(surface, (x, y, z))
        o[x, y, z] = v
        assert (v == 0) == (len({x, y, z}) <= 2)
    for x, y, z in itertools.product(germs, repeat=3):
        assert o[x, y, z] == o[y, z, x] == -o[x, z, y]
    for x, y, z, t in itertools.permutations(germs, 4):
        if o[x, y, z] == 1 and o[x, z, t] == 1:
            assert o[x, y, t] == 1


def test_cyclic_order_matches_square_oracle(Lc):
    conv = Lc.convex
    cone = conv.cones[0]
    ori = Origami(L_RIGHT, L_UP)
    cyc = ori.corner_cycle(0, LL)
    germs = list(iter_germs(Lc, [(1, 0), (0, 1), (1, 1), (2, 1), (-1, 2)]))

    def pos(g):
        c = cone.corners[g.corner]
        return ori.quarter_position(cyc, L_NAMES.index(c.polygon), c.vertex, g.dir)
    ps = [pos(g) for g in germs]
    rng = random.Random(2)
    for _ in range(3000):
        a, b, c = (rng.randrange(len(germs)) for _ in range(3))
        assert germ_cyclic_order(Lc, (germs[a], germs[b], germs[c])) == \
            cyclic_sign(len(cyc), ps[a], ps[b], ps[c])


def test_cyclic_order_needs_one_cone():
    s = build_surface(reference_graph(ExceptionalKind.FLAT_THETA))
    g = list(iter_germs(s, [(1, 0)]))
    other = [x for x in g if x.cone != g[0].cone]
    with pytest.raises(GermsAtDifferentCones):
        germ_cyclic_order(s, (g[0], g[0], other[0]))


# ---------------------------------------------------------------------------
# shared arcs and isolated singular crossings at the L cone

# (geodesic 1, geodesic 2, the six germs as (square, corner, direction) in the
# order arc start, first before, second before, arc end, first after, second
# after, with geodesic 2 oriented along the arc)
ARC_FIXTURES = {
    "bottom-rows": ([("s1", 1), ("s3", 1)], [("s2", 1), ("s3", 1)],
                    [(B, LL, E), (C, LR, W), (A, LR, W), (B, LR, W), (C, LL, E), (A, LL, E)]),
    "left-columns": ([("t1", 1), ("t3", 1)], [("t2", 1), ("t3", 1)],
                     [(C, LR, N), (B, UR, S), (A, UR, S), (C, UR, S), (B, LR, N), (A, LR, N)]),
    "turn-up": ([("s1", 1), ("s3", -1)], [("s1", 1), ("t2", 1)],
                [(C, LL, E), (B, UL, E), (A, UR, S), (C, LR, W), (B, UR, W), (A, LR, N)]),
    "opposite": ([("s1", 1), ("s3", -1)], [("s3", 1), ("t3", 1)],
                 [(B, UR, W), (C, LR, W), (C, LR, N), (B, UL, E), (C, LL, E), (C, UR, S)]),
}


@pytest.mark.parametrize("name", list(ARC_FIXTURES))
def test_shared_arc_sign_condition(Lc, name):
    g1, g2, germs = ARC_FIXTURES[name]
    ori = Origami(L_RIGHT, L_UP)
    cyc = ori.corner_cycle(0, LL)
    expected = shared_arc_linked(len(cyc), *(ori.quarter_position(cyc, *x) for x in germs))
    assert expected is (name in ("turn-up", "opposite"))  # frozen oracle output
    pat = intersection_pattern(chain(Lc, g1), chain(Lc, g2))
    arcs = [e for e in pat if e.kind is EventKind.SHARED_ARC]
    assert len(arcs) == 1
    assert arcs[0].linked is expected
    assert pat.linked is expected
    # homology agrees wherever it can decide
    if intersection(homology_of(g1), homology_of(g2)):
        assert expected


@pytest.mark.parametrize("g1,g2,linked", [
    ([("s1", 1)], [("t2", 1)], False),
    ([("s1", 1)], [("t3", 1)], True),
    ([("s2", 1)], [("t1", 1)], False),
    ([("s3", 1)], [("t3", 1)], True),
])
def test_isolated_singular_crossings(Lc, g1, g2, linked):
    pat = intersection_pattern(chain(Lc, g1), chain(Lc, g2))
    assert pat.linked is linked
    assert all(e.kind is EventKind.ISOLATED_SINGULAR for e in pat)
    if intersection(homology_of(g1), homology_of(g2)):
        assert linked


def _short_chains(Lc):
    out = []
    names = [(n, s) for n in LEGS for s in (1, -1)]
    for n in (1, 2):
        for seq in itertools.product(names, repeat=n):
            try:
                out.append((seq, chain(Lc, seq)))
            except MalformedPath:
                continue
    return out


def test_nonzero_intersection_forces_linking(Lc):
    chains = _short_chains(Lc)
    assert len(chains) > 30
    checked = 0
    for (a, ga), (b, gb) in itertools.combinations(chains, 2):
        if intersection(homology_of(a), homology_of(b)):
            checked += 1
            assert are_linked(ga, gb), (a, b)
    assert checked > 50


def test_symmetry_reversal_reroot(Lc):
    chains = [g for _, g in _short_chains(Lc)]
    rng = random.Random(4)
    for _ in range(150):
        x, y = rng.sample(chains, 2)
        v = are_linked(x, y)
        assert are_linked(y, x) is v
        assert are_linked(x.reversed(), y) is v
        assert are_linked(x.rerooted(1), y.reversed()) is v
    for x in chains:
        assert is_self_linked(x) is is_self_linked(x.reversed())
        assert is_self_linked(x) is is_self_linked(x.rerooted(1))


def test_malformed_chain_rejected(Lc):
    with pytest.raises(MalformedPath):
        chain(Lc, [("s1", 1), ("s1", -1)])


# ---------------------------------------------------------------------------
# family bound


def test_family_ceiling_values(Lc):
    assert family_ceiling(Lc) == (10, 1, 2, 0)
    theta = build_surface(reference_graph(ExceptionalKind.FLAT_THETA))
    assert family_ceiling(theta) == (28, 2, 0, 3)


def test_non_linked_family_within_bound(Lc):
    fam = [chain(Lc, [("s1", 1), ("s3", 1)]), chain(Lc, [("s2", 1), ("s3", 1)])]
    rep = check_family_bounds(Lc, fam)
    assert rep.ok and rep.count == 3 and rep.bound == 10


def test_linked_family_refused(Lc):
    with pytest.raises(FamilyIsLinked):
        check_family_bounds(Lc, [chain(Lc, [("s1", 1)]), chain(Lc, [("t3", 1)])])
