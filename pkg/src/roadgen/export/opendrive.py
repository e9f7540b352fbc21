"""OpenDRIVE (.xodr) emission for road scenarios.

Emits a documented subset of OpenDRIVE 1.6: one <road> per drivable chain
with exact planView geometry (line, arc, paramPoly3 for Beziers), lane
sections with per-lane widths and road marks, predecessor/successor links
for every scenario connection, and one <junction> element per junction
component. ``validate_opendrive`` checks emitted files against the same
subset.
"""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET

from ..components import ComponentKind, LaneMarking, RoadChain
from ..generation import RoadScenario
from ..geometry import ArcSegment, BezierSegment, Point2, StraightSegment

EXPORT_SAMPLES = 128

# LaneMarking -> (roadMark type, roadMark color). Fixed, documented table.
ROADMARK_STYLE: dict[LaneMarking, tuple[str, str]] = {
    LaneMarking.WHITE_DASHED: ("broken", "white"),
    LaneMarking.WHITE_SOLID: ("solid", "white"),
    LaneMarking.WHITE_DOUBLE_SOLID: ("solid solid", "white"),
    LaneMarking.YELLOW_DASHED: ("broken", "yellow"),
    LaneMarking.YELLOW_SOLID: ("solid", "yellow"),
    LaneMarking.YELLOW_DOUBLE_SOLID: ("solid solid", "yellow"),
    LaneMarking.YELLOW_DASHED_SOLID: ("solid broken", "yellow"),
}

JUNCTION_KINDS = frozenset(
    {
        ComponentKind.FORK,
        ComponentKind.T_INTERSECTION,
        ComponentKind.INTERSECTION,
        ComponentKind.ROUNDABOUT,
    }
)


def _fmt(value: float) -> str:
    return f"{value:.9g}"


def _road_id(instance_index: int, chain_index: int) -> str:
    return str(instance_index * 10 + chain_index + 1)


def _junction_id(instance_index: int) -> str:
    return str(100000 + instance_index)


def _segment_records(chain: RoadChain) -> list[dict]:
    """Per-segment planView geometry records with running s offsets."""
    records = []
    s = 0.0
    for seg in chain.segments:
        if isinstance(seg, StraightSegment):
            records.append(
                {
                    "s": s, "x": seg.start.position.x, "y": seg.start.position.y,
                    "hdg": seg.start.heading, "length": seg.length, "shape": ("line", {}),
                }
            )
            s += seg.length
        elif isinstance(seg, ArcSegment):
            records.append(
                {
                    "s": s, "x": seg.start.position.x, "y": seg.start.position.y,
                    "hdg": seg.start.heading, "length": seg.length,
                    "shape": ("arc", {"curvature": _fmt(seg.curvature)}),
                }
            )
            s += seg.length
        else:
            curve = seg.curve
            hdg = curve.start_tangent_heading()
            c, si = math.cos(-hdg), math.sin(-hdg)

            def local(p: Point2) -> tuple[float, float]:
                dx, dy = p.x - curve.p0.x, p.y - curve.p0.y
                return (c * dx - si * dy, si * dx + c * dy)

            q1, q2, q3 = local(curve.p1), local(curve.p2), local(curve.p3)
            length = seg.arc_length(EXPORT_SAMPLES)
            attrs = {
                "aU": "0", "bU": _fmt(3.0 * q1[0]),
                "cU": _fmt(3.0 * q2[0] - 6.0 * q1[0]),
                "dU": _fmt(q3[0] + 3.0 * q1[0] - 3.0 * q2[0]),
                "aV": "0", "bV": _fmt(3.0 * q1[1]),
                "cV": _fmt(3.0 * q2[1] - 6.0 * q1[1]),
                "dV": _fmt(q3[1] + 3.0 * q1[1] - 3.0 * q2[1]),
                "pRange": "normalized",
            }
            records.append(
                {
                    "s": s, "x": curve.p0.x, "y": curve.p0.y,
                    "hdg": hdg, "length": length, "shape": ("paramPoly3", attrs),
                }
            )
            s += length
    return records


def _lane_roadmark(lane_slot: str, marking: LaneMarking, bidirectional: bool) -> tuple[str, str]:
    """Marking for a lane's outer border.

    ``lane_slot``: "center", "edge" or "inner". The component's marking type
    sits on the center line for bidirectional roads and on the inner
    same-direction dividers for one-way roads; road edges are solid white.
    """
    if lane_slot == "center":
        return ROADMARK_STYLE[marking] if bidirectional else ("solid", "white")
    if lane_slot == "edge":
        return ("solid", "white")
    return ROADMARK_STYLE[marking] if not bidirectional else ("broken", "white")


def _append_lane(parent: ET.Element, lane_id: int, width_attrs: dict,
                 mark: tuple[str, str]) -> None:
    lane = ET.SubElement(parent, "lane", id=str(lane_id), type="driving", level="false")
    ET.SubElement(lane, "width", sOffset="0", **width_attrs)
    ET.SubElement(lane, "roadMark", sOffset="0", type=mark[0], color=mark[1], laneChange="both")


def _build_lanes(road: ET.Element, chain: RoadChain, marking: LaneMarking,
                 bidirectional: bool, chain_length: float) -> None:
    lanes_el = ET.SubElement(road, "lanes")
    section = ET.SubElement(lanes_el, "laneSection", s="0")
    n = max(chain.lanes_in, chain.lanes_out)
    left_count = n // 2 if bidirectional else 0
    right_count = n - left_count
    width = chain.lane_width

    if left_count:
        left = ET.SubElement(section, "left")
        for lane_id in range(left_count, 0, -1):
            slot = "edge" if lane_id == left_count else "inner"
            _append_lane(left, lane_id, {"a": _fmt(width), "b": "0", "c": "0", "d": "0"},
                         _lane_roadmark(slot, marking, bidirectional))

    center = ET.SubElement(section, "center")
    center_lane = ET.SubElement(center, "lane", id="0", type="none", level="false")
    mark = _lane_roadmark("center", marking, bidirectional)
    ET.SubElement(center_lane, "roadMark", sOffset="0", type=mark[0], color=mark[1],
                  laneChange="both")

    right = ET.SubElement(section, "right")
    for lane_id in range(-1, -right_count - 1, -1):
        width_attrs = {"a": _fmt(width), "b": "0", "c": "0", "d": "0"}
        if chain.lanes_in != chain.lanes_out and lane_id == -right_count:
            # The appearing/disappearing lane of a lane switch tapers linearly.
            if chain.lanes_out > chain.lanes_in:
                width_attrs = {"a": "0", "b": _fmt(width / chain_length), "c": "0", "d": "0"}
            else:
                width_attrs = {"a": _fmt(width), "b": _fmt(-width / chain_length),
                               "c": "0", "d": "0"}
        slot = "edge" if lane_id == -right_count else "inner"
        _append_lane(right, lane_id, width_attrs,
                     _lane_roadmark(slot, marking, bidirectional))


def _opposite(contact: str) -> str:
    return "start" if contact == "end" else "end"


def to_opendrive(scenario: RoadScenario) -> str:
    """Serialize a scenario to OpenDRIVE subset XML text."""
    root = ET.Element("OpenDRIVE")
    ET.SubElement(
        root, "header", revMajor="1", revMinor="6",
        name="roadgen scenario", vendor="roadgen",
    )

    # Link slots per road id, filled from scenario connections first.
    links: dict[str, dict[str, tuple[str, str]]] = {}
    for conn in scenario.connections:
        parent = scenario.instances[conn.from_instance]
        chain_idx, contact = parent.endpoint_contacts[conn.from_endpoint]
        parent_road = _road_id(conn.from_instance, chain_idx)
        child_road = _road_id(conn.to_instance, 0)
        parent_slot = "successor" if contact == "end" else "predecessor"
        links.setdefault(parent_road, {})[parent_slot] = (child_road, "start")
        links.setdefault(child_road, {})["predecessor"] = (parent_road, contact)

    for i, instance in enumerate(scenario.instances):
        for k, chain in enumerate(instance.chains):
            road_id = _road_id(i, k)
            records = _segment_records(chain)
            total = sum(r["length"] for r in records)
            road = ET.SubElement(
                root, "road",
                name=f"{instance.template.kind.value}-{i}",
                length=_fmt(total), id=road_id, junction="-1",
            )
            slots = links.get(road_id, {})
            if slots:
                link = ET.SubElement(road, "link")
                for slot in ("predecessor", "successor"):
                    if slot in slots:
                        other_id, contact = slots[slot]
                        ET.SubElement(link, slot, elementType="road",
                                      elementId=other_id, contactPoint=contact)
            plan = ET.SubElement(road, "planView")
            for rec in records:
                geom = ET.SubElement(
                    plan, "geometry",
                    s=_fmt(rec["s"]), x=_fmt(rec["x"]), y=_fmt(rec["y"]),
                    hdg=_fmt(rec["hdg"]), length=_fmt(rec["length"]),
                )
                shape, attrs = rec["shape"]
                ET.SubElement(geom, shape, **attrs)
            sig = instance.template.signature
            _build_lanes(road, chain, sig.marking, sig.bidirectional, max(total, 1e-9))

    for i, instance in enumerate(scenario.instances):
        if instance.template.kind not in JUNCTION_KINDS:
            continue
        junction = ET.SubElement(
            root, "junction", id=_junction_id(i), name=instance.template.kind.value
        )
        entry_road = _road_id(i, 0)
        conn_id = 0
        for chain_idx, contact in instance.endpoint_contacts:
            if chain_idx == 0:
                continue  # movement stays on the entry chain; no connecting road
            ET.SubElement(
                junction, "connection", id=str(conn_id),
                incomingRoad=entry_road,
                connectingRoad=_road_id(i, chain_idx),
                contactPoint=_opposite(contact),
            )
            conn_id += 1

    ET.indent(root)
    return ET.tostring(root, encoding="unicode", xml_declaration=True) + "\n"


# --------------------------------------------------------------------------
# Subset validator
# --------------------------------------------------------------------------

_ALLOWED_SHAPES = {"line", "arc", "paramPoly3"}
_ALLOWED_MARK_TYPES = {t for t, _ in ROADMARK_STYLE.values()} | {"none"}
_ALLOWED_MARK_COLORS = {"white", "yellow"}
_GEOMETRY_ATTRS = ("s", "x", "y", "hdg", "length")
_PARAMPOLY3_ATTRS = ("aU", "bU", "cU", "dU", "aV", "bV", "cV", "dV", "pRange")


def validate_opendrive(text: str, scenario: RoadScenario | None = None) -> list[str]:
    """Check document text against the emitted subset; returns found issues.

    With ``scenario`` given, additionally checks that every scenario
    connection appears as a predecessor/successor link pair and that the
    junction count matches the scenario's junction components.
    """
    issues: list[str] = []
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        return [f"XML parse error: {exc}"]
    if root.tag != "OpenDRIVE":
        return [f"root element is {root.tag!r}, expected 'OpenDRIVE'"]
    header = root.find("header")
    if header is None or header.get("revMajor") != "1" or header.get("revMinor") is None:
        issues.append("missing or incomplete header")

    roads = root.findall("road")
    road_ids = [r.get("id") for r in roads]
    if len(set(road_ids)) != len(road_ids):
        issues.append("duplicate road ids")
    known_roads = set(road_ids)

    for road in roads:
        rid = road.get("id")
        try:
            length = float(road.get("length", "nan"))
        except ValueError:
            length = float("nan")
        if not length > 0.0:
            issues.append(f"road {rid}: non-positive length")
        plan = road.find("planView")
        if plan is None:
            issues.append(f"road {rid}: missing planView")
            continue
        geoms = plan.findall("geometry")
        if not geoms:
            issues.append(f"road {rid}: planView has no geometry")
        s_total = 0.0
        for geom in geoms:
            for attr in _GEOMETRY_ATTRS:
                if geom.get(attr) is None:
                    issues.append(f"road {rid}: geometry missing {attr!r}")
            shapes = list(geom)
            if len(shapes) != 1 or shapes[0].tag not in _ALLOWED_SHAPES:
                issues.append(f"road {rid}: geometry must hold one of {_ALLOWED_SHAPES}")
                continue
            shape = shapes[0]
            # 9-significant-digit formatting bounds the s round-off error
            if abs(float(geom.get("s", "0")) - s_total) > 1e-4 * max(1.0, s_total):
                issues.append(f"road {rid}: geometry s offsets are not contiguous")
            s_total += float(geom.get("length", "0"))
            if shape.tag == "arc" and shape.get("curvature") is None:
                issues.append(f"road {rid}: arc missing curvature")
            if shape.tag == "paramPoly3":
                for attr in _PARAMPOLY3_ATTRS:
                    if shape.get(attr) is None:
                        issues.append(f"road {rid}: paramPoly3 missing {attr!r}")
        if abs(s_total - length) > 1e-3 * max(1.0, length):
            issues.append(f"road {rid}: geometry lengths sum to {s_total}, header says {length}")

        lanes = road.find("lanes")
        section = lanes.find("laneSection") if lanes is not None else None
        if section is None:
            issues.append(f"road {rid}: missing lanes/laneSection")
            continue
        center = section.find("center/lane[@id='0']")
        if center is None:
            issues.append(f"road {rid}: missing center lane 0")
        for lane in section.iter("lane"):
            if lane.get("id") != "0" and lane.find("width") is None:
                issues.append(f"road {rid}: driving lane {lane.get('id')} missing width")
            mark = lane.find("roadMark")
            if mark is not None:
                if mark.get("type") not in _ALLOWED_MARK_TYPES:
                    issues.append(f"road {rid}: roadMark type {mark.get('type')!r} not allowed")
                if mark.get("color") not in _ALLOWED_MARK_COLORS:
                    issues.append(f"road {rid}: roadMark color {mark.get('color')!r} not allowed")

        link = road.find("link")
        if link is not None:
            for ref in link:
                if ref.get("elementType") == "road" and ref.get("elementId") not in known_roads:
                    issues.append(f"road {rid}: link references unknown road "
                                  f"{ref.get('elementId')!r}")

    junctions = root.findall("junction")
    for junction in junctions:
        for conn in junction.findall("connection"):
            for attr in ("incomingRoad", "connectingRoad"):
                if conn.get(attr) not in known_roads:
                    issues.append(
                        f"junction {junction.get('id')}: {attr} {conn.get(attr)!r} unknown"
                    )

    if scenario is not None:
        expected = sum(
            1 for inst in scenario.instances if inst.template.kind in JUNCTION_KINDS
        )
        if len(junctions) != expected:
            issues.append(f"junction count {len(junctions)} != expected {expected}")
        by_id = {r.get("id"): r for r in roads}
        for conn in scenario.connections:
            parent = scenario.instances[conn.from_instance]
            chain_idx, contact = parent.endpoint_contacts[conn.from_endpoint]
            parent_road = _road_id(conn.from_instance, chain_idx)
            child_road = _road_id(conn.to_instance, 0)
            slot = "successor" if contact == "end" else "predecessor"
            parent_el = by_id.get(parent_road, ET.Element("x")).find(f"link/{slot}")
            child_el = by_id.get(child_road, ET.Element("x")).find("link/predecessor")
            if parent_el is None or parent_el.get("elementId") != child_road:
                issues.append(f"connection {conn}: parent road {parent_road} lacks {slot} link")
            if child_el is None or child_el.get("elementId") != parent_road:
                issues.append(f"connection {conn}: child road {child_road} lacks predecessor")
    return issues
