"""Canonical JSON serialization of road scenarios.

The document stores the defining data only (template ids, sampled
parameters, connections); geometry is rebuilt deterministically on load,
which keeps files small and makes the round trip exact. Key order is
fixed and every real is written with 9 significant digits, so a given
scenario always serializes to identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from ..components import (
    ComponentParams,
    ComponentTemplate,
    CurveParams,
    UTurnParams,
    catalog_hash,
    default_catalog,
    instantiate,
)
from ..errors import ParseError, ValidationError
from ..generation import Connection, RoadScenario, quantize, validate_scenario
from ..geometry import Point2, Pose

SCHEMA_VERSION = "1"


def _point(p: Point2) -> list[float]:
    return [quantize(p.x), quantize(p.y)]


def _params_payload(params: ComponentParams) -> dict:
    payload = {
        "length": quantize(params.length),
        "lane_width": quantize(params.lane_width),
        "start": {
            "x": quantize(params.start.position.x),
            "y": quantize(params.start.position.y),
            "heading": quantize(params.start.heading),
        },
    }
    extra = params.kind_specific
    if isinstance(extra, CurveParams):
        payload["curve"] = {
            "p0": _point(extra.p0),
            "p1": _point(extra.p1),
            "p2": _point(extra.p2),
            "p3": _point(extra.p3),
        }
    elif isinstance(extra, UTurnParams):
        payload["u_turn"] = {
            "leg_separation": quantize(extra.leg_separation),
            "apex_extension": quantize(extra.apex_extension),
        }
    return payload


def _params_from_payload(payload: dict) -> ComponentParams:
    start = payload["start"]
    kind_specific = None
    if "curve" in payload:
        c = payload["curve"]
        kind_specific = CurveParams(
            p0=Point2(*c["p0"]), p1=Point2(*c["p1"]),
            p2=Point2(*c["p2"]), p3=Point2(*c["p3"]),
        )
    elif "u_turn" in payload:
        u = payload["u_turn"]
        kind_specific = UTurnParams(
            leg_separation=float(u["leg_separation"]),
            apex_extension=float(u["apex_extension"]),
        )
    return ComponentParams(
        length=float(payload["length"]),
        lane_width=float(payload["lane_width"]),
        start=Pose(Point2(float(start["x"]), float(start["y"])), float(start["heading"])),
        kind_specific=kind_specific,
    )


@dataclass(frozen=True)
class ScenarioDocument:
    """A scenario plus the provenance needed to rebuild and re-validate it."""

    scenario: RoadScenario
    mode: str
    catalog_hash: str
    overlap_tolerance: float
    schema_version: str = SCHEMA_VERSION

    def dumps(self) -> str:
        doc = {
            "schema_version": self.schema_version,
            "metadata": {
                "mode": self.mode,
                "seed": self.scenario.seed,
                "catalog_hash": self.catalog_hash,
                "overlap_tolerance": quantize(self.overlap_tolerance),
                "short": self.scenario.short,
            },
            "instances": [
                {
                    "id": i,
                    "template_id": inst.template.template_id,
                    "params": _params_payload(inst.params),
                }
                for i, inst in enumerate(self.scenario.instances)
            ],
            "connections": [
                {
                    "from_instance": conn.from_instance,
                    "from_endpoint": conn.from_endpoint,
                    "to_instance": conn.to_instance,
                }
                for conn in self.scenario.connections
            ],
        }
        return json.dumps(doc, indent=2) + "\n"


def _catalog_or_default(catalog) -> list[ComponentTemplate]:
    return list(catalog) if catalog is not None else list(default_catalog())


def to_json(
    scenario: RoadScenario,
    *,
    mode: str = "guided",
    catalog=None,
    overlap_tolerance: float = 0.05,
) -> str:
    """Serialize a scenario to canonical JSON text."""
    templates = _catalog_or_default(catalog)
    return ScenarioDocument(
        scenario=scenario,
        mode=mode,
        catalog_hash=catalog_hash(templates),
        overlap_tolerance=overlap_tolerance,
    ).dumps()


def load_document(text: str, catalog=None, validate: bool = True) -> ScenarioDocument:
    """Parse document text, rebuild the scenario geometry and re-validate it."""
    templates = _catalog_or_default(catalog)
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc.msg}", exc.lineno, exc.colno) from exc
    if not isinstance(raw, dict):
        raise ParseError("document root must be an object")
    version = raw.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema_version {version!r}")
    try:
        meta = raw["metadata"]
        instance_rows = raw["instances"]
        connection_rows = raw["connections"]
    except KeyError as exc:
        raise ParseError(f"missing document key {exc.args[0]!r}") from exc

    expected_hash = catalog_hash(templates)
    if meta.get("catalog_hash") != expected_hash:
        raise ValidationError(
            "catalog-hash",
            f"document {meta.get('catalog_hash')!r} != active catalog {expected_hash!r}",
        )

    by_id = {t.template_id: t for t in templates}
    instances = []
    try:
        for i, row in enumerate(instance_rows):
            if row["id"] != i:
                raise ValidationError("instance-ids", f"expected id {i}, got {row['id']}")
            template = by_id.get(row["template_id"])
            if template is None:
                raise ValidationError("unknown-template", str(row["template_id"]))
            instance = instantiate(template, _params_from_payload(row["params"]))
            instances.append(instance.owned_by(i))
        connections = tuple(
            Connection(
                from_instance=int(row["from_instance"]),
                from_endpoint=int(row["from_endpoint"]),
                to_instance=int(row["to_instance"]),
            )
            for row in connection_rows
        )
    except (KeyError, TypeError, IndexError) as exc:
        raise ParseError(f"malformed document structure: {exc!r}") from exc

    scenario = RoadScenario(
        instances=tuple(instances),
        connections=connections,
        seed=int(meta.get("seed", 0)),
        short=bool(meta.get("short", False)),
    )
    tolerance = float(meta.get("overlap_tolerance", 0.05))
    if validate:
        validate_scenario(scenario, tolerance)
    return ScenarioDocument(
        scenario=scenario,
        mode=str(meta.get("mode", "guided")),
        catalog_hash=expected_hash,
        overlap_tolerance=tolerance,
    )


def from_json(text: str, catalog=None) -> RoadScenario:
    """Parse canonical JSON back into a validated scenario."""
    return load_document(text, catalog=catalog).scenario
