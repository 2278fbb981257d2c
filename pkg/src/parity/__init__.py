"""Crossing-free augmentation of plane geometric graphs under parity constraints."""

from .geom import (
    CCW,
    COLLINEAR,
    CW,
    GeneralPositionError,
    Point,
    Segment,
    convex_hull,
    orient,
    properly_cross,
    ray_first_hit,
)
from .model import (
    Edge,
    Instance,
    InvalidInstanceError,
    PlaneGraph,
    StructureError,
    edge_key,
    instance_digest,
    instance_from_json,
    instance_to_json,
    odd_degree_vertices,
    restrict_to_region,
    validate_instance,
    verify_happy_set,
    visibility_graph,
)
from .faces import FaceInstance, face_construct, face_feasible
from .oracle import OracleBudgetError, OracleLimits, OracleResult, brute_force, brute_force_within
from .dual import (
    HuggingCycle,
    HugResult,
    NotConvexlyHuggingError,
    NotConvexPositionError,
    build_dual,
    convex_graph_solve,
    solve_hugged,
)
from .paths import (
    NotAPathError,
    NotPseudoconvexError,
    PathResult,
    Pocket,
    adversarial_unhappy_set,
    is_pseudoconvex,
    is_universally_happy,
    path_order,
    plane_spanning_tree,
    pockets,
    solve_path,
    tight_hull,
    tjoin_from_tree,
)
from .generate import GenerationError, generate

__all__ = [name for name in dir() if not name.startswith("_")]
