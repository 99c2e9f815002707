"""Layout engine for layered, area-proportional rectangle contact representations."""

from .model import (
    ContactReport,
    StripInfeasibleError,
    Edge,
    InvalidInstanceError,
    LayeredGraph,
    Representation,
    VertexId,
    as_fraction,
    build_graph,
    contact_report,
    false_adjacency_pairs,
    validate_graph,
    validate_representation,
)
from .io import Instance, load_instance, load_representation, save_instance, save_representation
from .generate import gen_random_instance, random_layer_sizes
from .flow import (
    AreaResult,
    BoundingBoxResult,
    build_network,
    extract_representation,
    minimize_area,
    minimize_bounding_box,
    resolve_crossing_patterns,
    solve_min_cost_flow,
)
from .twolayer import (
    Block,
    PlacementOrder,
    TwoLayerResult,
    maximize_contacts_2layer,
    placement_order,
)
from .exact import (
    ContactModel,
    DifferenceConstraintSystem,
    ExactResult,
    build_model,
    check_feasible,
    export_lp,
    solve_branch_and_bound,
)
from .oracle import (
    GridSearchConfig,
    brute_force_max_contacts,
    brute_force_min_gap,
    composition_min_gap,
    subset_max_contacts,
)
from .svg import render_svg

__all__ = [
    "AreaResult",
    "Block",
    "BoundingBoxResult",
    "ContactModel",
    "DifferenceConstraintSystem",
    "ExactResult",
    "GridSearchConfig",
    "PlacementOrder",
    "TwoLayerResult",
    "brute_force_max_contacts",
    "brute_force_min_gap",
    "build_model",
    "build_network",
    "check_feasible",
    "composition_min_gap",
    "export_lp",
    "extract_representation",
    "maximize_contacts_2layer",
    "minimize_area",
    "minimize_bounding_box",
    "placement_order",
    "render_svg",
    "resolve_crossing_patterns",
    "solve_branch_and_bound",
    "solve_min_cost_flow",
    "subset_max_contacts",
    "ContactReport",
    "Edge",
    "Instance",
    "InvalidInstanceError",
    "LayeredGraph",
    "Representation",
    "StripInfeasibleError",
    "VertexId",
    "as_fraction",
    "build_graph",
    "contact_report",
    "false_adjacency_pairs",
    "gen_random_instance",
    "load_instance",
    "load_representation",
    "random_layer_sizes",
    "save_instance",
    "save_representation",
    "validate_graph",
    "validate_representation",
]
