"""Fundamental polyhedra, orbit tessellations and group presentations.

Works in Euclidean, spherical and hyperbolic space of any dimension, with
cell discovery implemented up to dimension three.
"""

from .dirichlet import DirichletDomain, GroupInput, dirichlet_domain
from .geometry import (
    TOL,
    TOL_GEOM,
    GeometryError,
    Isometry,
    Point,
    Space,
    convert,
    dist,
    geodesic_point,
    iso_eq,
    order,
)
from .paths import (
    AdaptedList,
    Factorization,
    build_adapted_list,
    factor_element,
    kappa,
    phi,
)
from .polyhedra import (
    HalfSpace,
    Polyhedron,
    bisector,
    essential_halfspaces,
    is_thick,
    relative_interior_point,
    side_test,
)
from .presentation import (
    Analysis,
    EdgeCycle,
    Presentation,
    SidePairing,
    ValidationError,
    analyze,
    build_presentation,
    edge_cycle,
    side_pairings,
)
from .tessellation import (
    Cell,
    ExplorationCapError,
    IncidenceError,
    Tessellation,
    Tile,
    Window,
    cell_generated_by,
    classify_cells,
    edge_loop,
    explore_tiles,
    verify_local_tessellation,
)
from .words import Relation, Word

__all__ = [
    "TOL", "TOL_GEOM", "GeometryError", "Isometry", "Point", "Space", "convert", "dist",
    "geodesic_point", "iso_eq", "order",
    "HalfSpace", "Polyhedron", "bisector", "essential_halfspaces", "is_thick",
    "relative_interior_point", "side_test",
    "Cell", "ExplorationCapError", "IncidenceError", "Tessellation", "Tile", "Window",
    "cell_generated_by", "classify_cells", "edge_loop", "explore_tiles", "verify_local_tessellation",
    "Analysis", "EdgeCycle", "Presentation", "SidePairing", "ValidationError", "analyze",
    "build_presentation", "edge_cycle", "side_pairings",
    "AdaptedList", "Factorization", "build_adapted_list", "factor_element", "kappa", "phi",
    "DirichletDomain", "GroupInput", "dirichlet_domain",
    "Relation", "Word",
]
