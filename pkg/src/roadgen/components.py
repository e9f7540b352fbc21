"""Road components: kinds, the parameterized template catalog, and
instantiation of templates into placed geometry.

A template fixes a component's kind, lane count, lane-marking type and
endpoint interface types. Instantiating it with concrete length, lane
width and a start pose produces lane centerlines, boundaries, a polygonal
footprint and typed endpoints where further components may attach.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property, lru_cache
from importlib import resources

import numpy as np
import yaml
from shapely.geometry import Polygon as _ShapelyPolygon
from shapely.geometry.polygon import orient as _orient
from shapely.ops import unary_union

from .errors import InstantiationError, ValidationError
from .geometry import (
    KAPPA,
    ArcSegment,
    BezierSegment,
    CubicBezier,
    Footprint,
    Point2,
    Pose,
    Segment,
    StraightSegment,
    advance_pose,
    heading_vector,
    normalize_heading,
    offset_polyline_xy,
)

# Samples per segment when lane polylines are materialized for rendering.
# Footprint discretization uses each segment's own rate: 32 per curved
# segment, while straight strips are exact with their two end sections.
LANE_SAMPLES = 32

MIN_LANES = 1
MAX_LANES = 6


class ComponentKind(str, Enum):
    STRAIGHT = "straight"
    CURVE = "curve"
    LANE_SWITCH = "lane_switch"
    FORK = "fork"
    T_INTERSECTION = "t_intersection"
    INTERSECTION = "intersection"
    U_TURN = "u_turn"
    ROUNDABOUT = "roundabout"


class LaneMarking(str, Enum):
    WHITE_DASHED = "white_dashed"
    WHITE_SOLID = "white_solid"
    WHITE_DOUBLE_SOLID = "white_double_solid"
    YELLOW_DASHED = "yellow_dashed"
    YELLOW_SOLID = "yellow_solid"
    YELLOW_DOUBLE_SOLID = "yellow_double_solid"
    YELLOW_DASHED_SOLID = "yellow_dashed_solid"


# Open endpoints per kind: total connectable arms minus the entry arm.
_ENDPOINT_COUNT = {
    ComponentKind.STRAIGHT: 1,
    ComponentKind.CURVE: 1,
    ComponentKind.LANE_SWITCH: 1,
    ComponentKind.U_TURN: 1,
    ComponentKind.FORK: 2,
    ComponentKind.T_INTERSECTION: 2,
    ComponentKind.INTERSECTION: 3,
    ComponentKind.ROUNDABOUT: 3,
}


def endpoint_count(kind: ComponentKind) -> int:
    """Number of open endpoints an instance of ``kind`` exposes."""
    return _ENDPOINT_COUNT[kind]


@dataclass(frozen=True)
class InterfaceSignature:
    """Connection type of an endpoint: lane count, marking, directionality.

    Two road pieces may join only where their signatures are equal.
    """

    lane_count: int
    marking: LaneMarking
    bidirectional: bool

    def __post_init__(self):
        if not MIN_LANES <= self.lane_count <= MAX_LANES:
            raise ValidationError(
                "lane-count", f"{self.lane_count} outside {MIN_LANES}..{MAX_LANES}"
            )

    def label(self) -> str:
        direction = "2way" if self.bidirectional else "1way"
        return f"{self.lane_count}L/{self.marking.value}/{direction}"


@dataclass(frozen=True)
class GeometrySettings:
    """Kind-level geometry constants carried by the catalog."""

    fork_divergence: float = math.radians(30.0)  # full angle between branches
    roundabout_island_radius: float = 12.0


@dataclass(frozen=True)
class ComponentTemplate:
    kind: ComponentKind
    signature: InterfaceSignature  # entry interface
    template_id: int
    endpoint_signatures: tuple[InterfaceSignature, ...]
    variant: str = ""  # "split"/"merge" for forks, "widen"/"narrow" for lane switches
    settings: GeometrySettings = GeometrySettings()

    def __post_init__(self):
        expected = endpoint_count(self.kind)
        if len(self.endpoint_signatures) != expected:
            raise ValidationError(
                "endpoint-count",
                f"{self.kind.value} declares {len(self.endpoint_signatures)}, expected {expected}",
            )

    def label(self) -> str:
        variant = f"/{self.variant}" if self.variant else ""
        return f"{self.kind.value}{variant}[{self.signature.label()}]"


@dataclass(frozen=True)
class CurveParams:
    """Explicit control points of a curve component's axis."""

    p0: Point2
    p1: Point2
    p2: Point2
    p3: Point2


@dataclass(frozen=True)
class UTurnParams:
    leg_separation: float  # centerline-to-centerline distance between the two legs
    apex_extension: float  # extra forward reach of the 180-degree joint


@dataclass(frozen=True)
class ComponentParams:
    length: float
    lane_width: float
    start: Pose
    kind_specific: CurveParams | UTurnParams | None = None


@dataclass(frozen=True)
class Endpoint:
    """Open boundary of a placed component; heading points outward."""

    pose: Pose
    signature: InterfaceSignature
    owner: int = -1  # instance id once placed in a scenario
    index: int = 0


@dataclass(frozen=True)
class RoadChain:
    """One drivable axis of a component: analytic segments plus derived lanes.

    Junction components consist of several chains (e.g. each arm); simple
    components of exactly one. The sampled polylines (arrays and Point2
    views) are functions of the analytic fields, so equality and hashing
    consider only those.
    """

    segments: tuple[Segment, ...]
    lanes_in: int
    lanes_out: int
    lane_width: float
    closed: bool = False
    # Footprint-resolution samples, filled in by the chain builders.
    axis_xy: np.ndarray = field(default=None, compare=False, repr=False)
    left_xy: np.ndarray = field(default=None, compare=False, repr=False)
    right_xy: np.ndarray = field(default=None, compare=False, repr=False)

    def length(self) -> float:
        return sum(seg.length for seg in self.segments)

    def sample_axis_xy(self, samples_per_segment: int) -> np.ndarray:
        parts = []
        for i, seg in enumerate(self.segments):
            xy = seg.sample_xy(samples_per_segment)
            parts.append(xy if i == 0 else xy[1:])  # drop shared joint point
        return np.vstack(parts)

    def _lane_offsets_at(self, fraction: np.ndarray, lane: int) -> np.ndarray:
        """Signed axis offset of a lane centerline along the chain (taper-aware)."""
        n = self.lanes_in + (self.lanes_out - self.lanes_in) * fraction
        off = ((n - 1) / 2.0 - lane) * self.lane_width
        limit = (n - 1) / 2.0 * self.lane_width
        return np.clip(off, -limit, limit)  # appearing lane rides the edge

    @cached_property
    def axis(self) -> tuple[Point2, ...]:
        return _as_point_tuple(self.sample_axis_xy(LANE_SAMPLES))

    @cached_property
    def lane_centerlines(self) -> tuple[tuple[Point2, ...], ...]:
        xy = self.sample_axis_xy(LANE_SAMPLES)
        if self.lanes_in == self.lanes_out:
            lines = [
                offset_polyline_xy(xy, off, closed=self.closed)
                for off in _lane_offsets(self.lanes_in, self.lane_width)
            ]
        else:
            # Tapered chains are straight; offsets vary along the axis.
            normal = _axis_normal(self.segments[0])
            fraction = np.linspace(0.0, 1.0, xy.shape[0])
            lines = [
                xy + normal * self._lane_offsets_at(fraction, j)[:, None]
                for j in range(max(self.lanes_in, self.lanes_out))
            ]
        return tuple(_as_point_tuple(line) for line in lines)

    @cached_property
    def left_boundary(self) -> tuple[Point2, ...]:
        return _as_point_tuple(self.left_xy)

    @cached_property
    def right_boundary(self) -> tuple[Point2, ...]:
        return _as_point_tuple(self.right_xy)


@dataclass(frozen=True)
class ComponentInstance:
    template: ComponentTemplate
    params: ComponentParams
    chains: tuple[RoadChain, ...]
    footprint: Footprint
    endpoints: tuple[Endpoint, ...]
    # Per endpoint: (chain index, "start" | "end") where it touches the chain.
    endpoint_contacts: tuple[tuple[int, str], ...]

    def owned_by(self, owner: int) -> "ComponentInstance":
        """Copy with every endpoint tagged as belonging to instance ``owner``."""
        from dataclasses import replace

        return replace(
            self, endpoints=tuple(replace(ep, owner=owner) for ep in self.endpoints)
        )

    @property
    def centerlines(self) -> tuple[tuple[Point2, ...], ...]:
        return tuple(line for chain in self.chains for line in chain.lane_centerlines)

    @property
    def boundaries(self) -> tuple[tuple[Point2, ...], ...]:
        out: list[tuple[Point2, ...]] = []
        for chain in self.chains:
            out.append(chain.left_boundary)
            out.append(chain.right_boundary)
        return tuple(out)


# --------------------------------------------------------------------------
# Catalog construction
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ValidityRule:
    """One row of the validity table: which combinations exist for which kinds."""

    kinds: tuple[ComponentKind, ...]
    lane_counts: tuple[int, ...]
    markings: tuple[LaneMarking, ...]
    bidirectional: bool


@dataclass(frozen=True)
class CatalogConfig:
    rules: tuple[ValidityRule, ...]
    settings: GeometrySettings = GeometrySettings()


def build_catalog(config: CatalogConfig) -> list[ComponentTemplate]:
    """Expand a validity table into a deterministic, duplicate-free catalog.

    Template ids are assigned in expansion order: rule by rule, kind by
    kind, lane count, marking, then variant, so the catalog is stable
    across runs for a fixed table.
    """
    templates: list[ComponentTemplate] = []
    seen: set[tuple] = set()

    def add(kind, sig, endpoint_sigs, variant=""):
        key = (kind, sig, tuple(endpoint_sigs), variant)
        if key in seen:
            return
        seen.add(key)
        templates.append(
            ComponentTemplate(
                kind=kind,
                signature=sig,
                template_id=len(templates),
                endpoint_signatures=tuple(endpoint_sigs),
                variant=variant,
                settings=config.settings,
            )
        )

    for rule in config.rules:
        for lanes in rule.lane_counts:
            if not MIN_LANES <= lanes <= MAX_LANES:
                raise ValidationError("lane-count", f"{lanes} outside {MIN_LANES}..{MAX_LANES}")
        for kind in rule.kinds:
            for lanes in rule.lane_counts:
                for marking in rule.markings:
                    sig = InterfaceSignature(lanes, marking, rule.bidirectional)
                    if kind is ComponentKind.LANE_SWITCH:
                        for target, variant in ((lanes + 1, "widen"), (lanes - 1, "narrow")):
                            if target in rule.lane_counts:
                                out_sig = InterfaceSignature(target, marking, rule.bidirectional)
                                add(kind, sig, (out_sig,), variant)
                    elif kind is ComponentKind.FORK:
                        for variant in ("split", "merge"):
                            add(kind, sig, (sig, sig), variant)
                    else:
                        add(kind, sig, (sig,) * endpoint_count(kind))
    return templates


def candidates_for(
    endpoint_sig: InterfaceSignature, catalog: list[ComponentTemplate]
) -> list[ComponentTemplate]:
    """Templates whose entry interface matches ``endpoint_sig``, in catalog order."""
    return [t for t in catalog if t.signature == endpoint_sig]


def catalog_hash(catalog: list[ComponentTemplate]) -> str:
    """Stable hex digest identifying a catalog's exact contents."""
    rows = [
        [
            t.template_id,
            t.kind.value,
            [t.signature.lane_count, t.signature.marking.value, t.signature.bidirectional],
            [[s.lane_count, s.marking.value, s.bidirectional] for s in t.endpoint_signatures],
            t.variant,
            [t.settings.fork_divergence, t.settings.roundabout_island_radius],
        ]
        for t in catalog
    ]
    blob = json.dumps(rows, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def load_catalog_config(path) -> CatalogConfig:
    """Read a validity table from YAML.

    Keys: ``rules`` (list of {kinds, lane_counts, markings, bidirectional})
    and optional ``parameters`` ({fork_divergence_deg, roundabout_island_radius}).
    """
    with open(path, "r", encoding="utf-8") as fh:
        raw = yaml.safe_load(fh)
    return _config_from_mapping(raw, source=str(path))


def _config_from_mapping(raw: dict, source: str = "<config>") -> CatalogConfig:
    if not isinstance(raw, dict) or "rules" not in raw:
        raise ValidationError("catalog-config", f"{source}: missing 'rules'")
    params = raw.get("parameters") or {}
    settings = GeometrySettings(
        fork_divergence=math.radians(float(params.get("fork_divergence_deg", 30.0))),
        roundabout_island_radius=float(params.get("roundabout_island_radius", 12.0)),
    )
    rules = []
    for i, row in enumerate(raw["rules"]):
        try:
            kinds = tuple(ComponentKind(k) for k in row["kinds"])
            markings = tuple(LaneMarking(m) for m in row["markings"])
        except ValueError as exc:
            raise ValidationError("catalog-config", f"{source} rule {i}: {exc}") from exc
        rules.append(
            ValidityRule(
                kinds=kinds,
                lane_counts=tuple(int(n) for n in row["lane_counts"]),
                markings=markings,
                bidirectional=bool(row["bidirectional"]),
            )
        )
    return CatalogConfig(rules=tuple(rules), settings=settings)


@lru_cache(maxsize=1)
def default_catalog_config() -> CatalogConfig:
    text = resources.files("roadgen.data").joinpath("default_catalog.yaml").read_text()
    return _config_from_mapping(yaml.safe_load(text), source="default_catalog.yaml")


@lru_cache(maxsize=1)
def default_catalog() -> tuple[ComponentTemplate, ...]:
    return tuple(build_catalog(default_catalog_config()))


# --------------------------------------------------------------------------
# Instantiation
# --------------------------------------------------------------------------


def _lane_offsets(lane_count: int, lane_width: float) -> list[float]:
    # Lane 0 is leftmost; offsets are signed distances from the road axis.
    return [((lane_count - 1) / 2.0 - j) * lane_width for j in range(lane_count)]


def _as_point_tuple(xy: np.ndarray) -> tuple[Point2, ...]:
    return tuple(Point2(float(x), float(y)) for x, y in xy)


def _axis_normal(segment: StraightSegment) -> np.ndarray:
    h = segment.start.heading
    return np.array([-math.sin(h), math.cos(h)])


def _constant_chain(segments: tuple[Segment, ...], lanes: int, width: float,
                    closed: bool = False) -> RoadChain:
    axis_xy = np.vstack(
        [seg.sample_xy(seg.footprint_samples) if i == 0
         else seg.sample_xy(seg.footprint_samples)[1:]
         for i, seg in enumerate(segments)]
    )
    half = lanes * width / 2.0
    return RoadChain(
        segments=segments,
        lanes_in=lanes,
        lanes_out=lanes,
        lane_width=width,
        closed=closed,
        axis_xy=axis_xy,
        left_xy=offset_polyline_xy(axis_xy, half, closed=closed),
        right_xy=offset_polyline_xy(axis_xy, -half, closed=closed),
    )


def _taper_chain(segment: StraightSegment, lanes_in: int, lanes_out: int,
                 width: float) -> RoadChain:
    """Straight chain whose lane count transitions linearly along its length.

    The boundary taper is linear, so the two end cross-sections describe
    the strip exactly.
    """
    axis_xy = segment.sample_xy(1)
    normal = _axis_normal(segment)
    widths = np.array([lanes_in, lanes_out]) * width / 2.0
    return RoadChain(
        segments=(segment,),
        lanes_in=lanes_in,
        lanes_out=lanes_out,
        lane_width=width,
        axis_xy=axis_xy,
        left_xy=axis_xy + normal * widths[:, None],
        right_xy=axis_xy - normal * widths[:, None],
    )


def _dedupe_ring(coords: np.ndarray) -> np.ndarray:
    """Drop consecutive near-coincident vertices; GEOS noding chokes on
    zero-length edges."""
    keep = np.empty(coords.shape[0], dtype=bool)
    keep[0] = True
    deltas = np.abs(np.diff(coords, axis=0)).sum(axis=1)
    keep[1:] = deltas > 1e-9
    coords = coords[keep]
    if coords.shape[0] > 1 and np.abs(coords[0] - coords[-1]).sum() <= 1e-9:
        coords = coords[:-1]
    return coords


def _chain_strip_polygon(chain: RoadChain) -> _ShapelyPolygon:
    if chain.closed:
        # Ring chains cover their full disc: nothing may be placed on the
        # island anyway, and a disc keeps the footprint a simple polygon.
        ring = _dedupe_ring(chain.right_xy)  # outer edge of a CCW ring
    else:
        ring = _dedupe_ring(np.vstack([chain.right_xy, chain.left_xy[::-1]]))
    poly = _ShapelyPolygon(ring)
    if not poly.is_valid:
        raise InstantiationError("chain strip self-intersects")
    return poly


def _footprint_from_chains(chains: tuple[RoadChain, ...]) -> Footprint:
    pieces = [_chain_strip_polygon(c) for c in chains]
    try:
        merged = unary_union(pieces) if len(pieces) > 1 else pieces[0]
    except Exception as exc:  # GEOS topology failures on degenerate input
        raise InstantiationError(f"footprint union failed: {exc}") from exc
    if merged.geom_type != "Polygon" or merged.is_empty:
        raise InstantiationError(f"footprint union produced {merged.geom_type}")
    merged = _orient(merged, sign=1.0)
    coords = list(merged.exterior.coords)
    if coords[0] == coords[-1]:
        coords = coords[:-1]
    try:
        return Footprint(tuple(Point2(x, y) for x, y in coords))
    except ValidationError as exc:
        raise InstantiationError(f"degenerate footprint: {exc}") from exc


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise InstantiationError(message)


def instantiate(template: ComponentTemplate, params: ComponentParams) -> ComponentInstance:
    """Build a fully placed component from a template and concrete parameters.

    Deterministic: identical inputs always produce identical geometry.
    Raises InstantiationError for parameters that violate the template's
    constraints (callers typically re-draw parameters and retry).
    """
    _require(params.length > 0.0, f"length must be > 0, got {params.length}")
    _require(params.lane_width > 0.0, f"lane_width must be > 0, got {params.lane_width}")

    kind = template.kind
    builder = _BUILDERS[kind]
    chains, endpoint_poses, contacts = builder(template, params)

    endpoints = tuple(
        Endpoint(pose=pose, signature=template.endpoint_signatures[i], owner=-1, index=i)
        for i, pose in enumerate(endpoint_poses)
    )
    return ComponentInstance(
        template=template,
        params=params,
        chains=chains,
        footprint=_footprint_from_chains(chains),
        endpoints=endpoints,
        endpoint_contacts=contacts,
    )


def _build_straight(template, params):
    n = template.signature.lane_count
    seg = StraightSegment(params.start, params.length)
    chain = _constant_chain((seg,), n, params.lane_width)
    return (chain,), (seg.end_pose(),), ((0, "end"),)


def _build_curve(template, params):
    _require(isinstance(params.kind_specific, CurveParams),
             "curve component requires CurveParams")
    cp: CurveParams = params.kind_specific
    start = params.start
    _require(cp.p0.distance_to(start.position) <= 1e-6,
             "curve p0 must coincide with the start position")
    curve = CubicBezier(cp.p0, cp.p1, cp.p2, cp.p3)
    tangent = curve.start_tangent_heading()
    dh = abs(normalize_heading(tangent - start.heading + math.pi) - math.pi)
    _require(dh <= 1e-6, "curve must leave along the start heading")
    seg = BezierSegment(curve)
    chain = _constant_chain((seg,), template.signature.lane_count, params.lane_width)
    return (chain,), (seg.end_pose(),), ((0, "end"),)


def _build_lane_switch(template, params):
    n_in = template.signature.lane_count
    n_out = template.endpoint_signatures[0].lane_count
    seg = StraightSegment(params.start, params.length)
    chain = _taper_chain(seg, n_in, n_out, params.lane_width)
    return (chain,), (seg.end_pose(),), ((0, "end"),)


def _build_fork(template, params):
    n = template.signature.lane_count
    width = params.lane_width
    length = params.length
    start = params.start
    h = start.heading
    half_angle = template.settings.fork_divergence / 2.0
    junction = advance_pose(start, length)

    if template.variant == "merge":
        # Entry rides one branch; the trunk leaves the junction deflected by
        # half the divergence and the second branch mirrors the entry.
        trunk = StraightSegment(Pose(junction.position, h + half_angle), length)
        other_dir = h + 2.0 * half_angle + math.pi
        tip = junction.position + heading_vector(other_dir).scaled(length)
        other = StraightSegment(Pose(tip, h + 2.0 * half_angle), length)
        chains = (
            _constant_chain((StraightSegment(start, length),), n, width),
            _constant_chain((trunk,), n, width),
            _constant_chain((other,), n, width),
        )
        endpoints = (trunk.end_pose(), Pose(tip, other_dir))
        contacts = ((1, "end"), (2, "start"))
    else:
        left = StraightSegment(Pose(junction.position, h + half_angle), length)
        right = StraightSegment(Pose(junction.position, h - half_angle), length)
        chains = (
            _constant_chain((StraightSegment(start, length),), n, width),
            _constant_chain((left,), n, width),
            _constant_chain((right,), n, width),
        )
        endpoints = (left.end_pose(), right.end_pose())
        contacts = ((1, "end"), (2, "end"))
    return chains, endpoints, contacts


def _build_t_intersection(template, params):
    n = template.signature.lane_count
    width = params.lane_width
    start = params.start
    h = start.heading
    main = StraightSegment(start, params.length)
    mid = advance_pose(start, params.length / 2.0)
    arm = StraightSegment(Pose(mid.position, h + math.pi / 2.0), params.length / 2.0)
    chains = (
        _constant_chain((main,), n, width),
        _constant_chain((arm,), n, width),
    )
    endpoints = (main.end_pose(), arm.end_pose())
    return chains, endpoints, ((0, "end"), (1, "end"))


def _build_intersection(template, params):
    n = template.signature.lane_count
    width = params.lane_width
    start = params.start
    h = start.heading
    length = params.length
    main = StraightSegment(start, length)
    center = advance_pose(start, length / 2.0).position
    cross_start = center + heading_vector(h - math.pi / 2.0).scaled(length / 2.0)
    cross = StraightSegment(Pose(cross_start, h + math.pi / 2.0), length)
    chains = (
        _constant_chain((main,), n, width),
        _constant_chain((cross,), n, width),
    )
    endpoints = (
        main.end_pose(),  # through
        cross.end_pose(),  # left arm
        Pose(cross_start, h - math.pi / 2.0),  # right arm, outward
    )
    return chains, endpoints, ((0, "end"), (1, "end"), (1, "start"))


def _build_u_turn(template, params):
    _require(isinstance(params.kind_specific, UTurnParams),
             "u_turn component requires UTurnParams")
    up: UTurnParams = params.kind_specific
    _require(up.leg_separation > 0.0, "leg separation must be > 0")
    _require(up.apex_extension >= 0.0, "apex extension must be >= 0")
    n = template.signature.lane_count
    width = params.lane_width
    start = params.start
    length = params.length
    b = up.leg_separation / 2.0
    a = b + up.apex_extension

    def local(x: float, y: float) -> Point2:
        return start.local_to_world(Point2(x, y))

    # Two quarter-ellipse Beziers join the legs with a 180-degree left turn;
    # apex_extension stretches the forward semi-axis beyond a circular arc.
    quarter1 = CubicBezier(
        local(length, 0.0),
        local(length + KAPPA * a, 0.0),
        local(length + a, b - KAPPA * b),
        local(length + a, b),
    )
    quarter2 = CubicBezier(
        local(length + a, b),
        local(length + a, b + KAPPA * b),
        local(length + KAPPA * a, 2.0 * b),
        local(length, 2.0 * b),
    )
    segments = (
        StraightSegment(start, length),
        BezierSegment(quarter1),
        BezierSegment(quarter2),
        StraightSegment(Pose(local(length, 2.0 * b), start.heading + math.pi), length),
    )
    chain = _constant_chain(segments, n, width)
    end = Pose(local(0.0, 2.0 * b), start.heading + math.pi)
    return (chain,), (end,), ((0, "end"),)


def _build_roundabout(template, params):
    n = template.signature.lane_count
    width = params.lane_width
    start = params.start
    h = start.heading
    arm_len = params.length
    island = template.settings.roundabout_island_radius
    ring_radius = island + n * width / 2.0  # circulating axis
    outer = island + n * width
    center = start.position + heading_vector(h).scaled(arm_len + outer)

    chains = [_constant_chain((StraightSegment(start, arm_len),), n, width)]
    endpoints = []
    contacts = []
    base = h + math.pi  # angle of the entry arm as seen from the center
    for k in (1, 2, 3):  # exits in counterclockwise circulation order
        angle = normalize_heading(base + k * math.pi / 2.0)
        foot = center + heading_vector(angle).scaled(outer)
        arm = StraightSegment(Pose(foot, angle), arm_len)
        chains.append(_constant_chain((arm,), n, width))
        endpoints.append(arm.end_pose())
        contacts.append((k, "end"))

    ring_start = Pose(center + heading_vector(base).scaled(ring_radius), base + math.pi / 2.0)
    ring = ArcSegment(ring_start, 2.0 * math.pi * ring_radius, 1.0 / ring_radius)
    chains.append(_constant_chain((ring,), n, width, closed=True))
    return tuple(chains), tuple(endpoints), tuple(contacts)


_BUILDERS = {
    ComponentKind.STRAIGHT: _build_straight,
    ComponentKind.CURVE: _build_curve,
    ComponentKind.LANE_SWITCH: _build_lane_switch,
    ComponentKind.FORK: _build_fork,
    ComponentKind.T_INTERSECTION: _build_t_intersection,
    ComponentKind.INTERSECTION: _build_intersection,
    ComponentKind.U_TURN: _build_u_turn,
    ComponentKind.ROUNDABOUT: _build_roundabout,
}
