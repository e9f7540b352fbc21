"""Scenario assembly: grow road scenarios by connecting components.

Guided mode favors the least-used template at every selection point so a
batch spreads over the whole catalog quickly; random mode picks uniformly
and serves as the baseline. Both reject placements whose footprint would
overlap already-placed components, and both are deterministic for a fixed
seed.
"""

from __future__ import annotations

import math
import time
from collections import Counter, deque
from dataclasses import dataclass, field

import numpy as np
import yaml

from .components import (
    ComponentInstance,
    ComponentKind,
    ComponentParams,
    ComponentTemplate,
    CurveParams,
    Endpoint,
    InterfaceSignature,
    UTurnParams,
    candidates_for,
    instantiate,
)
from .errors import InstantiationError, ValidationError
from .geometry import (
    Footprint,
    Point2,
    Pose,
    advance_pose,
    footprints_overlap,
    heading_vector,
    normalize_heading,
)

DEFAULT_LENGTH_RANGE = (20.0, 100.0)
DEFAULT_LANE_WIDTH_RANGE = (3.0, 4.0)


def quantize(value: float) -> float:
    """Round to 9 significant digits; sampled parameters are stored in this
    form so their JSON serialization is lossless."""
    return float(f"{value:.9g}")


def _canonical_heading(heading: float) -> float:
    h = quantize(normalize_heading(heading))
    return 0.0 if h >= 2.0 * math.pi else h


def canonical_pose(pose: Pose) -> Pose:
    return Pose(
        Point2(quantize(pose.position.x), quantize(pose.position.y)),
        _canonical_heading(pose.heading),
    )


@dataclass(frozen=True)
class Constraints:
    """Parameter ranges and knobs that keep sampled components realistic."""

    length_range: dict[ComponentKind, tuple[float, float]] = field(
        default_factory=lambda: {kind: DEFAULT_LENGTH_RANGE for kind in ComponentKind}
    )
    lane_width_range: tuple[float, float] = DEFAULT_LANE_WIDTH_RANGE
    expansion_probability: float = 0.5
    max_instantiation_retries: int = 16
    overlap_tolerance: float = 0.05
    curve_turn_range: tuple[float, float] = (math.radians(15.0), math.radians(90.0))
    uturn_gap_range: tuple[float, float] = (4.0, 20.0)
    uturn_apex_extension_range: tuple[float, float] = (0.0, 8.0)

    def __post_init__(self):
        for kind, (lo, hi) in self.length_range.items():
            if not 0.0 < lo <= hi:
                raise ValidationError("length-range", f"{kind.value}: [{lo}, {hi}]")
        lo, hi = self.lane_width_range
        if not 0.0 < lo <= hi:
            raise ValidationError("lane-width-range", f"[{lo}, {hi}]")
        if not 0.0 < self.expansion_probability <= 1.0:
            raise ValidationError("expansion-probability", str(self.expansion_probability))
        if self.max_instantiation_retries < 1:
            raise ValidationError("retries", str(self.max_instantiation_retries))

    def length_for(self, kind: ComponentKind) -> tuple[float, float]:
        return self.length_range.get(kind, DEFAULT_LENGTH_RANGE)


def load_constraints(path) -> Constraints:
    """Read constraints from YAML (keys: length_range, lane_width_range,
    expansion_probability, retries, plus optional sampling ranges)."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = yaml.safe_load(fh) or {}
    kwargs = {}
    if "length_range" in raw:
        table = dict(Constraints().length_range)
        for key, pair in raw["length_range"].items():
            table[ComponentKind(key)] = (float(pair[0]), float(pair[1]))
        kwargs["length_range"] = table
    for yaml_key, attr in [
        ("lane_width_range", "lane_width_range"),
        ("curve_turn_range_deg", "curve_turn_range"),
        ("uturn_gap_range", "uturn_gap_range"),
        ("uturn_apex_extension_range", "uturn_apex_extension_range"),
    ]:
        if yaml_key in raw:
            lo, hi = (float(v) for v in raw[yaml_key])
            if attr == "curve_turn_range":
                lo, hi = math.radians(lo), math.radians(hi)
            kwargs[attr] = (lo, hi)
    if "expansion_probability" in raw:
        kwargs["expansion_probability"] = float(raw["expansion_probability"])
    if "retries" in raw:
        kwargs["max_instantiation_retries"] = int(raw["retries"])
    if "overlap_tolerance" in raw:
        kwargs["overlap_tolerance"] = float(raw["overlap_tolerance"])
    return Constraints(**kwargs)


@dataclass
class UsageCounter:
    """How many times each template has been instantiated."""

    counts: Counter = field(default_factory=Counter)

    def count(self, template_id: int) -> int:
        return self.counts.get(template_id, 0)

    def record(self, template_id: int) -> None:
        self.counts[template_id] += 1

    def total(self) -> int:
        return sum(self.counts.values())

    def covered(self) -> set[int]:
        return {tid for tid, c in self.counts.items() if c > 0}


@dataclass(frozen=True)
class GenerationBudget:
    """Stop condition for a batch: a scenario count or a wall-clock duration."""

    scenario_count: int | None = None
    duration_seconds: float | None = None

    def __post_init__(self):
        if (self.scenario_count is None) == (self.duration_seconds is None):
            raise ValidationError("budget", "exactly one of count/duration must be set")
        if self.scenario_count is not None and self.scenario_count <= 0:
            raise ValidationError("budget", "scenario count must be positive")
        if self.duration_seconds is not None and self.duration_seconds <= 0.0:
            raise ValidationError("budget", "duration must be positive")

    @staticmethod
    def count(n: int) -> "GenerationBudget":
        return GenerationBudget(scenario_count=n)

    @staticmethod
    def duration(seconds: float) -> "GenerationBudget":
        return GenerationBudget(duration_seconds=seconds)

    @staticmethod
    def parse(text: str) -> "GenerationBudget":
        """"500" means 500 scenarios; "24h" / "30m" / "90s" mean wall-clock time."""
        text = text.strip()
        if text and text[-1] in "hms":
            factor = {"h": 3600.0, "m": 60.0, "s": 1.0}[text[-1]]
            return GenerationBudget.duration(float(text[:-1]) * factor)
        return GenerationBudget.count(int(text))


@dataclass(frozen=True)
class Connection:
    """A placed component (``to_instance``) attached at a parent endpoint."""

    from_instance: int
    from_endpoint: int
    to_instance: int


@dataclass(frozen=True)
class RoadScenario:
    instances: tuple[ComponentInstance, ...]
    connections: tuple[Connection, ...]
    seed: int
    short: bool = False  # endpoint queue ran dry before reaching the target size

    @property
    def covered_area(self) -> tuple[Footprint, ...]:
        return tuple(inst.footprint for inst in self.instances)

    def size(self) -> int:
        return len(self.instances)


# --------------------------------------------------------------------------
# Selection and placement
# --------------------------------------------------------------------------


def select_least_used(
    candidates: list[ComponentTemplate],
    usage: UsageCounter,
    rng: np.random.Generator,
) -> ComponentTemplate:
    """Pick a template with the minimal usage count; ties break uniformly."""
    if not candidates:
        raise ValueError("candidates must be non-empty")
    lowest = min(usage.count(t.template_id) for t in candidates)
    tied = [t for t in candidates if usage.count(t.template_id) == lowest]
    if len(tied) == 1:
        return tied[0]
    return tied[int(rng.integers(0, len(tied)))]


def _select_uniform(
    candidates: list[ComponentTemplate],
    usage: UsageCounter,
    rng: np.random.Generator,
) -> ComponentTemplate:
    if not candidates:
        raise ValueError("candidates must be non-empty")
    return candidates[int(rng.integers(0, len(candidates)))]


def _uniform(rng: np.random.Generator, lo: float, hi: float) -> float:
    return quantize(lo + (hi - lo) * float(rng.random()))


def _sample_params(
    template: ComponentTemplate,
    start: Pose,
    constraints: Constraints,
    rng: np.random.Generator,
) -> ComponentParams:
    lo, hi = constraints.length_for(template.kind)
    length = _uniform(rng, lo, hi)
    width = _uniform(rng, *constraints.lane_width_range)
    kind_specific = None

    if template.kind is ComponentKind.CURVE:
        t_lo, t_hi = constraints.curve_turn_range
        # Cap the turn so the inner lane edge cannot fold over itself.
        road_half_width = template.signature.lane_count * width / 2.0
        max_turn = length / (road_half_width + 2.0)
        turn = min(_uniform(rng, t_lo, t_hi), max_turn)
        if rng.random() < 0.5:
            turn = -turn
        kind_specific = _curve_control_points(start, length, turn)
    elif template.kind is ComponentKind.U_TURN:
        road_width = template.signature.lane_count * width
        gap = _uniform(rng, *constraints.uturn_gap_range)
        kind_specific = UTurnParams(
            leg_separation=quantize(road_width + gap),
            apex_extension=_uniform(rng, *constraints.uturn_apex_extension_range),
        )
    return ComponentParams(
        length=length, lane_width=width, start=start, kind_specific=kind_specific
    )


def _curve_control_points(start: Pose, length: float, turn: float) -> CurveParams:
    """Near-circular cubic for an arc of the given length and turn angle."""
    h = start.heading
    if abs(turn) < 1e-6:
        chord = length
        handle = length / 3.0
        end = start.position + heading_vector(h).scaled(chord)
        end_heading = h
    else:
        radius = length / abs(turn)
        chord = 2.0 * radius * math.sin(abs(turn) / 2.0)
        end = start.position + heading_vector(h + turn / 2.0).scaled(chord)
        end_heading = h + turn
        handle = (4.0 / 3.0) * math.tan(abs(turn) / 4.0) * radius
    p0 = start.position
    p1 = p0 + heading_vector(h).scaled(handle)
    p3 = Point2(quantize(end.x), quantize(end.y))
    p2 = p3 - heading_vector(end_heading).scaled(handle)
    return CurveParams(
        p0=p0,
        p1=Point2(quantize(p1.x), quantize(p1.y)),
        p2=Point2(quantize(p2.x), quantize(p2.y)),
        p3=p3,
    )


def try_instantiate_at(
    endpoint: Endpoint,
    template: ComponentTemplate,
    constraints: Constraints,
    covered: list[Footprint] | tuple[Footprint, ...],
    rng: np.random.Generator,
) -> ComponentInstance | None:
    """Attempt to place ``template`` at an endpoint without overlapping
    anything already placed; returns None once the retry budget is spent."""
    if template.signature != endpoint.signature:
        raise ValueError(
            f"template {template.label()} does not match endpoint {endpoint.signature.label()}"
        )
    start = canonical_pose(endpoint.pose)
    for _ in range(constraints.max_instantiation_retries):
        params = _sample_params(template, start, constraints, rng)
        try:
            instance = instantiate(template, params)
        except InstantiationError:
            continue
        if any(
            footprints_overlap(instance.footprint, fp, constraints.overlap_tolerance)
            for fp in covered
        ):
            continue
        return instance
    return None


# --------------------------------------------------------------------------
# Algorithm core
# --------------------------------------------------------------------------

ORIGIN_POSE = Pose(Point2(0.0, 0.0), 0.0)


def _grow_scenario(
    catalog: list[ComponentTemplate] | tuple[ComponentTemplate, ...],
    total_count: int,
    constraints: Constraints,
    usage: UsageCounter,
    rng: np.random.Generator,
    selector,
    candidate_map: dict[InterfaceSignature, list[ComponentTemplate]] | None,
    seed: int,
) -> RoadScenario:
    catalog = list(catalog)
    if not catalog:
        raise ValueError("catalog must be non-empty")
    if total_count < 1:
        raise ValueError(f"total_count must be >= 1, got {total_count}")

    instances: list[ComponentInstance] = []
    connections: list[Connection] = []
    covered: list[Footprint] = []
    queue: deque[Endpoint] = deque()

    def place(instance: ComponentInstance) -> None:
        owned = instance.owned_by(len(instances))
        instances.append(owned)
        covered.append(owned.footprint)
        usage.record(owned.template.template_id)
        queue.extend(owned.endpoints)

    # First component: selected over the whole catalog, placed at the origin.
    first_template = selector(catalog, usage, rng)
    first = None
    for _ in range(64):  # open space; failure would mean broken constraints
        first = try_instantiate_at(
            Endpoint(pose=ORIGIN_POSE, signature=first_template.signature),
            first_template,
            constraints,
            [],
            rng,
        )
        if first is not None:
            break
    if first is None:
        raise InstantiationError(
            f"could not instantiate {first_template.label()} in open space"
        )
    place(first)

    while len(instances) < total_count and queue:
        endpoint = queue.popleft()
        expand = rng.random() < constraints.expansion_probability
        if not (expand or not queue):  # skipped endpoints are dropped, not re-queued
            continue
        if candidate_map is not None:
            cands = list(candidate_map.get(endpoint.signature, ()))
        else:
            cands = candidates_for(endpoint.signature, catalog)
        while cands:
            template = selector(cands, usage, rng)
            instance = try_instantiate_at(endpoint, template, constraints, covered, rng)
            if instance is not None:
                connections.append(
                    Connection(
                        from_instance=endpoint.owner,
                        from_endpoint=endpoint.index,
                        to_instance=len(instances),
                    )
                )
                place(instance)
                break
            cands.remove(template)

    return RoadScenario(
        instances=tuple(instances),
        connections=tuple(connections),
        seed=seed,
        short=len(instances) < total_count,
    )


def generate_scenario(
    catalog,
    total_count: int,
    constraints: Constraints,
    usage: UsageCounter,
    rng: np.random.Generator,
    seed: int = 0,
) -> RoadScenario:
    """Grow one scenario with least-used guidance (see module docstring)."""
    return _grow_scenario(
        catalog, total_count, constraints, usage, rng,
        selector=select_least_used, candidate_map=None, seed=seed,
    )


def _child_rng(root: np.random.SeedSequence, index: int) -> tuple[np.random.Generator, int]:
    child = np.random.SeedSequence(entropy=root.entropy, spawn_key=(index,))
    derived = int(child.generate_state(1, np.uint64)[0])
    return np.random.Generator(np.random.PCG64(derived)), derived


def generate_batch(
    mode: str,
    budget: GenerationBudget,
    total_count: int,
    constraints: Constraints,
    catalog,
    seed: int,
) -> list[RoadScenario]:
    """Generate scenarios until the budget is exhausted.

    Guided mode shares one usage counter across the whole batch; random
    mode replaces every least-used selection with a uniform draw. Output is
    deterministic for a fixed seed under a scenario-count budget.
    """
    if mode not in ("guided", "random"):
        raise ValueError(f"mode must be 'guided' or 'random', got {mode!r}")
    selector = select_least_used if mode == "guided" else _select_uniform
    catalog = list(catalog)
    candidate_map: dict[InterfaceSignature, list[ComponentTemplate]] = {}
    for template in catalog:
        candidate_map.setdefault(template.signature, []).append(template)

    usage = UsageCounter()
    root = np.random.SeedSequence(seed)
    scenarios: list[RoadScenario] = []
    deadline = (
        time.monotonic() + budget.duration_seconds
        if budget.duration_seconds is not None
        else None
    )
    index = 0
    while True:
        if budget.scenario_count is not None and index >= budget.scenario_count:
            break
        if deadline is not None and time.monotonic() >= deadline:
            break
        rng, derived = _child_rng(root, index)
        scenarios.append(
            _grow_scenario(
                catalog, total_count, constraints, usage, rng,
                selector=selector, candidate_map=candidate_map, seed=derived,
            )
        )
        index += 1
    return scenarios


# --------------------------------------------------------------------------
# Scenario validation
# --------------------------------------------------------------------------


def validate_scenario(scenario: RoadScenario, overlap_tolerance: float = 0.05) -> None:
    """Re-check the scenario invariants; raises ValidationError naming the
    violated invariant ("signature-match", "connectivity", "no-overlap")."""
    instances = scenario.instances
    for conn in scenario.connections:
        parent = instances[conn.from_instance]
        child = instances[conn.to_instance]
        endpoint = parent.endpoints[conn.from_endpoint]
        if endpoint.signature != child.template.signature:
            raise ValidationError(
                "signature-match",
                f"connection {conn.from_instance}:{conn.from_endpoint} -> {conn.to_instance}",
            )

    if instances:
        adjacent: dict[int, set[int]] = {i: set() for i in range(len(instances))}
        for conn in scenario.connections:
            adjacent[conn.from_instance].add(conn.to_instance)
            adjacent[conn.to_instance].add(conn.from_instance)
        seen = {0}
        stack = [0]
        while stack:
            node = stack.pop()
            for nxt in adjacent[node]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        if len(seen) != len(instances):
            raise ValidationError("connectivity", f"{len(seen)}/{len(instances)} reachable")

    for i in range(len(instances)):
        for j in range(i + 1, len(instances)):
            if footprints_overlap(
                instances[i].footprint, instances[j].footprint, overlap_tolerance
            ):
                raise ValidationError("no-overlap", f"instances {i} and {j} overlap")
