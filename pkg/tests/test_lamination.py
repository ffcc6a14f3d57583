import random

import pytest

from flatlam.cones import germ_at_corner
from flatlam.exact import Vec2
from flatlam.fixtures import random_rectangle_surface
from flatlam.flow import Outcome, cylinder_decomposition
from flatlam.lamination import (
    CYLINDER_CORE,
    LeafFamily,
    classify_components,
    cylindrical_component_fullness,
    family_from_direction,
    validate_family,
)
from flatlam.linking import regular_geodesic, saddle_geodesic
from flatlam.tracer import SurfacePoint, saddle_connection_from_germ, shoot


def unit(s, pid, vertex, d):
    return saddle_connection_from_germ(s, germ_at_corner(s.convex, pid, vertex, d), d)


def horizontal(s, pid, x, y):
    return regular_geodesic(s, shoot(s, SurfacePoint(pid, Vec2.of(x, y)), (1, 0), 100))


def test_three_parallel_cores_one_component(L):
    leaves = [horizontal(L, "A", "1/2", y) for y in ("1/4", "1/2", "3/4")]
    fam = LeafFamily.of(L, leaves)
    assert validate_family(L, fam).ok
    rep = classify_components(L, fam)
    assert rep.count == 1
    (comp,) = rep.cylindrical
    assert len(comp.members) == 6
    assert comp.cylinder.area == 2


def test_two_connection_leaf_is_graph_component(L):
    leaf = saddle_geodesic(L, [unit(L, "C", 0, (1, 0)), unit(L, "B", 0, (1, 0))])
    fam = LeafFamily.of(L, [leaf])
    assert validate_family(L, fam).ok
    rep = classify_components(L, fam)
    assert rep.count == 1 and not rep.cylindrical
    (g,) = rep.graph_support
    assert len(g.vertices) == 1 and len(g.edges) == 2
    assert g.periodic_pair


def test_equal_images_share_a_component(L):
    s1 = unit(L, "C", 0, (1, 0))
    s3 = unit(L, "B", 0, (1, 0))
    a = saddle_geodesic(L, [s1, s3])
    b = saddle_geodesic(L, [s3, s1])
    rep = classify_components(L, LeafFamily.of(L, [a, b]))
    assert len(rep.graph_support) == 1
    assert len(rep.graph_support[0].members) == 4


def test_every_leaf_assigned_once(L):
    leaves = [horizontal(L, "A", "1/2", "1/3"), horizontal(L, "C", "1/2", "3/2"),
              saddle_geodesic(L, [unit(L, "A", 0, (1, 0))])]
    fam = LeafFamily.of(L, leaves)
    rep = classify_components(L, fam)
    members = [id(m) for c in rep.cylindrical for m in c.members]
    members += [id(m) for g in rep.graph_support for m in g.members]
    assert sorted(members) == sorted(id(lf) for lf in fam.leaves)
    assert rep.count <= len(fam.leaves)


@pytest.mark.parametrize("d", [(1, 0), (0, 1), (1, 1), (1, 2)])
def test_periodic_direction_one_component_per_cylinder(L, d):
    dec = cylinder_decomposition(L, d, 100)
    assert dec.outcome is Outcome.PERIODIC
    fam = family_from_direction(L, d, 100)
    assert validate_family(L, fam).ok
    rep = classify_components(L, fam)
    assert len(rep.cylindrical) == len(dec.cylinders)
    assert not rep.graph_support
    assert {c.cylinder for c in rep.cylindrical} == set(dec.cylinders)
    assert all(lf.provenance == CYLINDER_CORE for lf in fam.leaves)


def test_random_surfaces_component_per_cylinder():
    rng = random.Random(21)
    for _ in range(6):
        s = random_rectangle_surface(rng, 3)
        fam = family_from_direction(s, (1, 0), 200)
        rep = classify_components(s, fam)
        assert len(rep.cylindrical) == len(cylinder_decomposition(s, (1, 0), 200).cylinders)


def test_linked_family_rejected(L):
    fam = LeafFamily.of(L, [horizontal(L, "A", "1/2", "1/2"),
                            regular_geodesic(L, shoot(L, SurfacePoint("A", Vec2.of("1/3", "1/2")),
                                                      (0, 1), 100))])
    rep = validate_family(L, fam)
    assert not rep.ok
    assert any("linked" in v for v in rep.violations)


def test_reversal_closure_checked(L):
    leaf = horizontal(L, "A", "1/2", "1/2")
    fam = LeafFamily.of(L, [leaf])
    broken = LeafFamily(fam.surface, tuple(fam.primary))
    assert not validate_family(L, broken).ok


def test_fullness(L):
    fam = family_from_direction(L, (1, 0), 100, full=True)
    rep = classify_components(L, fam)
    for comp in rep.cylindrical:
        f = cylindrical_component_fullness(L, comp)
        assert f.full and f.covered_sq == comp.cylinder.height_sq
    fam = family_from_direction(L, (1, 0), 100)
    for comp in classify_components(L, fam).cylindrical:
        f = cylindrical_component_fullness(L, comp)
        assert not f.full and f.covered_sq == 0


def test_undetermined_direction_forwards_domains(L):
    fam = family_from_direction(L, (55, 89), 20)
    rep = classify_components(L, fam)
    assert rep.candidate_minimal_domains
    assert any(line.startswith("candidate-minimal-domain") for line in rep.lines())


def test_report_lines_deterministic(L):
    def run():
        fam = family_from_direction(L, (1, 1), 100, full=True)
        leaf = saddle_geodesic(L, [unit(L, "C", 0, (1, 0)), unit(L, "B", 0, (1, 0))])
        fam2 = LeafFamily.of(L, [leaf])
        return "\n".join(classify_components(L, fam).lines() + classify_components(L, fam2).lines())
    assert run() == run()
