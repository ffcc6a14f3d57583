"""Finite leaf families as skeletons of flat laminations.

A family holds closed geodesics together with their reversals.  Valid
families are pairwise non-linked and have no self-linked leaf; their leaves
fall into cylindrical components (regular closed leaves grouped by the
maximal cylinder they sit in) and graph-supported components (leaves made of
saddle connections, grouped by image).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .flow import CandidateDomain, Cylinder, Outcome, cylinder_decomposition, maximal_cylinder
from .linking import (
    ClosedGeodesic,
    FamilyIsLinked,
    are_linked,
    check_family_bounds,
    is_self_linked,
    regular_geodesic,
)
from .surface import HalfTranslationSurface, ValidationReport

USER = "user"
CYLINDER_CORE = "cylinder core"
SEPARATRIX_CYCLE = "separatrix cycle"


@dataclass(frozen=True)
class Leaf:
    geodesic: ClosedGeodesic
    provenance: str = USER
    reversal: bool = False


@dataclass(frozen=True)
class LeafFamily:
    """Closed leaves; ``leaves`` always contains each leaf and its reversal."""

    surface: HalfTranslationSurface = field(repr=False)
    leaves: tuple[Leaf, ...]
    full_cylinders: frozenset = frozenset()  # cylinder keys declared as full interval families
    candidate_domains: tuple[CandidateDomain, ...] = ()

    @classmethod
    def of(cls, s: HalfTranslationSurface, geodesics: Sequence[ClosedGeodesic],
           provenance: str = USER, full_cylinders=(), candidate_domains=()) -> "LeafFamily":
        leaves = []
        for g in geodesics:
            leaves.append(Leaf(g, provenance))
            leaves.append(Leaf(g.reversed(), provenance, True))
        return cls(s.convex, tuple(leaves), frozenset(full_cylinders), tuple(candidate_domains))

    @property
    def primary(self) -> list[Leaf]:
        return [lf for lf in self.leaves if not lf.reversal]


def family_from_direction(s: HalfTranslationSurface, d, max_sq_length,
                          full: bool = False) -> LeafFamily:
    """Core curves of the cylinders in direction d (optionally declared full)."""
    dec = cylinder_decomposition(s, d, max_sq_length)
    cores = [regular_geodesic(s, c.core) for c in dec.cylinders]
    keys = [c.key for c in dec.cylinders] if full else []
    domains = dec.candidate_domains if dec.outcome is not Outcome.PERIODIC else ()
    return LeafFamily.of(s, cores, CYLINDER_CORE, keys, domains)


def validate_family(s: HalfTranslationSurface, f: LeafFamily) -> ValidationReport:
    v = []
    prim = f.primary
    for i, lf in enumerate(prim):
        if is_self_linked(lf.geodesic):
            v.append(f"leaf {i} is self-linked")
    for (i, a), (j, b) in combinations(enumerate(prim), 2):
        if are_linked(a.geodesic, b.geodesic):
            v.append(f"leaves {i} and {j} are linked")
    images = {}
    for lf in f.leaves:
        images.setdefault((lf.geodesic.image_key(), lf.reversal), 0)
    for lf in prim:
        if (lf.geodesic.image_key(), True) not in images:
            v.append("family is not closed under reversal")
            break
    try:
        rep = check_family_bounds(s, [lf.geodesic for lf in prim])
        if not rep.ok:
            v.append(f"family uses {rep.count} saddle connections, above the ceiling {rep.bound}")
    except FamilyIsLinked as exc:
        if not v:
            v.append(str(exc))
    return ValidationReport(tuple(v))


@dataclass(frozen=True)
class CylindricalComponent:
    cylinder: Cylinder
    members: tuple[Leaf, ...]
    declared_full: bool = False


@dataclass(frozen=True)
class GraphComponent:
    vertices: tuple[int, ...]  # cone indices
    edges: tuple  # unoriented saddle-connection keys
    members: tuple[Leaf, ...]

    @property
    def periodic_pair(self) -> bool:
        """A single closed leaf together with its reversal."""
        return len(self.members) == 2


@dataclass(frozen=True)
class ComponentReport:
    cylindrical: tuple[CylindricalComponent, ...]
    graph_support: tuple[GraphComponent, ...]
    isolated: tuple[Leaf, ...] = ()
    candidate_minimal_domains: tuple[CandidateDomain, ...] = ()

    @property
    def count(self) -> int:
        return len(self.cylindrical) + len(self.graph_support) + len(self.isolated)

    def lines(self) -> list[str]:
        out = []
        for c in self.cylindrical:
            cyl = c.cylinder
            out.append(f"cylindrical  leaves={len(c.members)}  direction={cyl.direction}  "
                       f"circumference^2={cyl.circumference_sq}  height^2={cyl.height_sq}  "
                       f"area={cyl.area}" + ("  full" if c.declared_full else ""))
        for g in self.graph_support:
            kind = "periodic-pair" if g.periodic_pair else "graph"
            out.append(f"graph-support  leaves={len(g.members)}  vertices={len(g.vertices)}  "
                       f"edges={len(g.edges)}  {kind}")
        for dom in self.candidate_minimal_domains:
            out.append(f"candidate-minimal-domain  strips={len(dom.strips)}  "
                       f"boundary-connections={len(dom.boundary)}")
        return out


def _leaf_sort_key(lf: Leaf):
    g = lf.geodesic.normalized()
    return (repr(g.image_key()), lf.reversal, repr(g.keys()), repr(g.leaf_key))


def classify_components(s: HalfTranslationSurface, f: LeafFamily) -> ComponentReport:
    """Group leaves into cylindrical and graph-supported components."""
    leaves = sorted(f.leaves, key=_leaf_sort_key)
    cyl_groups: dict = {}
    graph_groups: dict = {}
    cyl_of: dict = {}
    for lf in leaves:
        g = lf.geodesic
        if g.is_regular:
            cyl = maximal_cylinder(s, g.leaf)
            cyl_of.setdefault(cyl.key, cyl)
            cyl_groups.setdefault(cyl.key, []).append(lf)
        else:
            graph_groups.setdefault(g.image_key(), []).append(lf)
    cylindrical = tuple(
        CylindricalComponent(cyl_of[k], tuple(members), k in f.full_cylinders)
        for k, members in sorted(cyl_groups.items(), key=lambda kv: repr(kv[0])))
    graphs = []
    for key, members in sorted(graph_groups.items(), key=lambda kv: repr(kv[0])):
        cones = sorted({c for lf in members for sc in lf.geodesic.connections
                        for c in (sc.start.cone, sc.end.cone)})
        graphs.append(GraphComponent(tuple(cones), key[1:], tuple(members)))
    report = ComponentReport(cylindrical, tuple(graphs), (), f.candidate_domains)
    assert report.count <= len(f.leaves)
    return report


@dataclass(frozen=True)
class Fullness:
    full: bool
    covered_sq: Fraction  # square of the covered transverse height


def cylindrical_component_fullness(s: HalfTranslationSurface,
                                   comp: CylindricalComponent) -> Fullness:
    """Full only for declared interval families; finitely many leaves cover measure 0."""
    if comp.declared_full:
        return Fullness(True, comp.cylinder.height_sq)
    return Fullness(False, Fraction(0))
