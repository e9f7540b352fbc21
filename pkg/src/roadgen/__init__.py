"""roadgen: procedural generation of diverse road-network scenarios.

Eight parameterized road-component types are instantiated from a template
catalog, connected by a diversity-guided algorithm with overlap rejection,
deduplicated by a topology-similarity metric, and exported as OpenDRIVE
subset XML, SVG renderings, and canonical JSON.
"""

from .components import (
    ComponentInstance,
    ComponentKind,
    ComponentParams,
    ComponentTemplate,
    CurveParams,
    Endpoint,
    InterfaceSignature,
    LaneMarking,
    UTurnParams,
    build_catalog,
    candidates_for,
    catalog_hash,
    default_catalog,
    endpoint_count,
    instantiate,
    load_catalog_config,
)
from .errors import InstantiationError, ParseError, ValidationError
from .export import from_json, to_json, to_opendrive, to_svg, validate_opendrive
from .generation import (
    Connection,
    Constraints,
    GenerationBudget,
    RoadScenario,
    UsageCounter,
    generate_batch,
    generate_scenario,
    load_constraints,
    select_least_used,
    try_instantiate_at,
    validate_scenario,
)
from .geometry import (
    CubicBezier,
    Footprint,
    Point2,
    Pose,
    advance_pose,
    bezier_eval,
    bezier_polyline,
    footprints_overlap,
)
from .topology import (
    TopologyGraph,
    deduplicate,
    edge_duplicated,
    is_duplicate,
    similarity,
    to_graph,
    uniqueness_rate,
    vertex_duplicated,
)

__version__ = "0.1.0"
