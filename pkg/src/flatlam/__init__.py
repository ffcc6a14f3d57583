"""Exact computations on half-translation surfaces.

Surfaces are rational polygons with edge gluings by translations or
half-turns.  The package traces straight trajectories, enumerates saddle
connections and cylinders, decides whether closed geodesics are linked,
thickens ribbon graphs into flat surfaces and sorts finite leaf families into
lamination components.
"""

from .exact import Direction, Q, Vec2
from .flow import Cylinder, DirectionClassification, Outcome, cylinder_decomposition, maximal_cylinder
from .lamination import LeafFamily, classify_components, family_from_direction, validate_family
from .linking import (
    ClosedGeodesic,
    are_linked,
    check_family_bounds,
    intersection_pattern,
    is_self_linked,
    regular_geodesic,
    saddle_geodesic,
)
from .ribbon import RibbonGraph, build_surface, is_exceptional, right_turn_cycles, surface_invariants
from .surface import (
    Gluing,
    GluingKind,
    HalfTranslationSurface,
    Polygon,
    compute_singularities,
    euler_characteristic,
    validate_surface,
)
from .tracer import SurfacePoint, continuations, saddle_connections, shoot

__version__ = "0.1.0"

__all__ = [
    "ClosedGeodesic", "Cylinder", "Direction", "DirectionClassification", "Gluing", "GluingKind",
    "HalfTranslationSurface", "LeafFamily", "Outcome", "Polygon", "Q", "RibbonGraph",
    "SurfacePoint", "Vec2", "are_linked", "build_surface", "check_family_bounds",
    "classify_components", "compute_singularities", "continuations", "cylinder_decomposition",
    "euler_characteristic", "family_from_direction", "intersection_pattern", "is_exceptional",
    "is_self_linked", "maximal_cylinder", "regular_geodesic", "right_turn_cycles",
    "saddle_connections", "saddle_geodesic", "shoot", "surface_invariants", "validate_family",
    "validate_surface",
]
