from fractions import Fraction

import pytest

from flatlam.exact import Direction, Vec2
from flatlam.fixtures import l_surface, square_torus
from flatlam.ribbon import REFERENCE_GRAPHS, ExceptionalKind, build_surface
from flatlam.surface import (
    AngleNotMultipleOfPi,
    Gluing,
    GluingKind,
    HalfTranslationSurface,
    Polygon,
    compute_singularities,
    euler_characteristic,
    gauss_bonnet_defect,
    validate_surface,
)
from oracles import L_RIGHT, L_UP, Origami

UNIT = [(0, 0), (1, 0), (1, 1), (0, 1)]


def test_torus_validates_and_is_regular(torus):
    assert validate_surface(torus).ok
    assert compute_singularities(torus) == []
    assert euler_characteristic(torus) == 0


def test_length_mismatch_is_reported():
    s = HalfTranslationSurface(
        (Polygon("A", UNIT), Polygon("B", [(0, 0), (2, 0), (2, 1), (0, 1)])),
        (Gluing(("A", 0), ("B", 2)),))
    rep = validate_surface(s)
    assert any("mismatch" in v for v in rep.violations)


def test_single_square_with_mismatched_gluing():
    s = HalfTranslationSurface((Polygon("A", [(0, 0), (2, 0), (2, 1), (0, 1)]),),
                               (Gluing(("A", 0), ("A", 1)),))
    assert not validate_surface(s).ok


def test_clockwise_polygon_and_dangling_reference():
    s = HalfTranslationSurface((Polygon("A", list(reversed(UNIT))),),
                               (Gluing(("A", 0), ("Z", 2)),))
    rep = validate_surface(s)
    assert len(rep.violations) >= 2


def test_disconnected_complex_reported():
    t = square_torus()
    s = HalfTranslationSurface(
        t.polygons + (Polygon("B", UNIT),),
        t.gluings + (Gluing(("B", 0), ("B", 2)), Gluing(("B", 1), ("B", 3))))
    assert any("connected" in v for v in validate_surface(s).violations)


def test_l_surface_gluing_equations_by_hand(L):
    # every translation gluing pairs opposite edge vectors
    for g in L.gluings:
        va = L.polygon(g.a.polygon).edge_vector(g.a.index)
        vb = L.polygon(g.b.polygon).edge_vector(g.b.index)
        assert g.kind is GluingKind.TRANSLATION and va == -vb
    assert validate_surface(L).ok


def test_l_surface_single_cone_of_angle_six_pi(L):
    cones = compute_singularities(L)
    assert [c.k for c in cones] == [6]
    # corner walk: twelve right angles meet at the cone
    assert len(cones[0].corners) == 12
    assert 12 * Fraction(1, 2) == 6


def test_l_surface_euler_matches_cell_count(L):
    assert euler_characteristic(L) == Origami(L_RIGHT, L_UP).euler_characteristic() == -2
    assert gauss_bonnet_defect(L) == 0


def test_flat_theta_surface_invariants():
    s = build_surface(REFERENCE_GRAPHS[ExceptionalKind.FLAT_THETA])
    assert validate_surface(s).ok
    assert euler_characteristic(s) == -1
    assert sorted(c.k for c in compute_singularities(s)) == [3, 3]


def test_ribbon_cone_from_valence_three_vertex():
    s = build_surface(REFERENCE_GRAPHS[ExceptionalKind.DUMBBELL])
    assert sorted(c.k for c in compute_singularities(s)) == [3, 3]


def test_angle_not_multiple_of_pi():
    s = HalfTranslationSurface((Polygon("T", [(0, 0), (1, 0), (0, 1)]),), ())
    assert any("multiple of pi" in v for v in validate_surface(s).violations)
    with pytest.raises(AngleNotMultipleOfPi):
        compute_singularities(s)


def test_pillowcase_is_rejected_but_balances_angles():
    # two squares, horizontal sides glued by flips: a sphere with four pi-points
    a, b = Polygon("A", UNIT), Polygon("B", UNIT)
    glue = (Gluing(("A", 0), ("B", 0), GluingKind.FLIP),
            Gluing(("A", 2), ("B", 2), GluingKind.FLIP),
            Gluing(("A", 1), ("B", 3)), Gluing(("B", 1), ("A", 3)))
    s = HalfTranslationSurface((a, b), glue)
    rep = validate_surface(s)
    assert len(rep.violations) == 4 and all("< 2*pi" in v for v in rep.violations)
    assert [c.k for c in s.cones] == [1, 1, 1, 1]
    assert euler_characteristic(s) == 2 and gauss_bonnet_defect(s) == 0


def test_direction_canonical_sign():
    assert Direction.of(Vec2.of(-2, -4)) == Direction.of(Vec2.of(1, 2)) == Direction(1, 2)
    assert Direction.of(Vec2.of(0, -3)) == Direction(0, 1)
    assert Direction.of(Vec2.of("1/2", "-1/3")) == Direction(3, -2)


def test_gluing_involution(L):
    for e in L.edges():
        if L.is_glued(e):
            f, _ = L.partner(e)
            assert L.partner(f)[0] == e
            tr, back = L.transfer(e), L.transfer(f)
            for z in L.polygon(e.polygon).edge(e.index):
                assert back.apply(tr.apply(z)) == z
