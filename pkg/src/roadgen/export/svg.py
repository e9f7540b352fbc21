"""SVG rendering of road scenarios for visual inspection.

Draws each component's footprint as road surface, lane dividers in their
marking styles, lane centerlines, and annotated endpoints. Coordinates are
emitted in pixels (meters times ``scale``) with the y axis flipped so north
is up; the viewBox fits the scenario bounding box with a 5% margin.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET

from ..components import ComponentInstance, LaneMarking
from ..generation import RoadScenario
from ..geometry import Point2, heading_vector

ROAD_FILL = "#4d4d52"
BACKGROUND = "#e8e4da"
CENTERLINE_STYLE = {"stroke": "#9aa0a6", "stroke-width": 0.08, "dasharray": "1 2"}
ENDPOINT_COLOR = "#c0392b"

# stroke color, dash pattern (meters), stroke width (meters)
MARKING_STYLE: dict[LaneMarking, tuple[str, str | None, float]] = {
    LaneMarking.WHITE_DASHED: ("#f5f5f5", "3 9", 0.15),
    LaneMarking.WHITE_SOLID: ("#f5f5f5", None, 0.15),
    LaneMarking.WHITE_DOUBLE_SOLID: ("#f5f5f5", None, 0.4),
    LaneMarking.YELLOW_DASHED: ("#e8b23a", "3 9", 0.15),
    LaneMarking.YELLOW_SOLID: ("#e8b23a", None, 0.15),
    LaneMarking.YELLOW_DOUBLE_SOLID: ("#e8b23a", None, 0.4),
    LaneMarking.YELLOW_DASHED_SOLID: ("#e8b23a", "6 3", 0.3),
}
EDGE_STYLE = ("#f5f5f5", None, 0.15)


def _fmt(value: float) -> str:
    return f"{value:.9g}"


def _scenario_bounds(scenario: RoadScenario) -> tuple[float, float, float, float]:
    xs: list[float] = []
    ys: list[float] = []
    for inst in scenario.instances:
        minx, miny, maxx, maxy = inst.footprint.bounds()
        xs.extend((minx, maxx))
        ys.extend((miny, maxy))
    return min(xs), min(ys), max(xs), max(ys)


def _divider_lines(instance: ComponentInstance):
    """Lane-divider polylines with their marking, derived per chain.

    The component's marking type styles the center line of bidirectional
    roads and every internal divider of one-way roads; other dividers of
    bidirectional roads are plain dashed white.
    """
    sig = instance.template.signature
    for chain in instance.chains:
        lanes = chain.lane_centerlines
        n = len(lanes)
        left_count = n // 2 if sig.bidirectional else 0
        for j in range(n - 1):
            divider = tuple(
                Point2((a.x + b.x) / 2.0, (a.y + b.y) / 2.0)
                for a, b in zip(lanes[j], lanes[j + 1])
            )
            if sig.bidirectional:
                style = (
                    MARKING_STYLE[sig.marking]
                    if j == left_count - 1
                    else MARKING_STYLE[LaneMarking.WHITE_DASHED]
                )
            else:
                style = MARKING_STYLE[sig.marking]
            yield divider, style
        yield chain.left_boundary, EDGE_STYLE
        yield chain.right_boundary, EDGE_STYLE


def to_svg(scenario: RoadScenario, scale: float = 4.0) -> str:
    """Render the scenario to SVG text at ``scale`` pixels per meter."""
    if scale <= 0.0:
        raise ValueError(f"scale must be > 0, got {scale}")
    if not scenario.instances:
        raise ValueError("cannot render an empty scenario")
    minx, miny, maxx, maxy = _scenario_bounds(scenario)
    margin = 0.05 * max(maxx - minx, maxy - miny, 1.0)

    def px(p: Point2) -> tuple[float, float]:
        return ((p.x - minx + margin) * scale, (maxy + margin - p.y) * scale)

    def path_data(points, close: bool = False) -> str:
        coords = [px(p) for p in points]
        head = f"M {_fmt(coords[0][0])} {_fmt(coords[0][1])}"
        tail = " ".join(f"L {_fmt(x)} {_fmt(y)}" for x, y in coords[1:])
        return f"{head} {tail}" + (" Z" if close else "")

    width = (maxx - minx + 2.0 * margin) * scale
    height = (maxy - miny + 2.0 * margin) * scale
    root = ET.Element(
        "svg",
        xmlns="http://www.w3.org/2000/svg",
        viewBox=f"0 0 {_fmt(width)} {_fmt(height)}",
        width=_fmt(width),
        height=_fmt(height),
    )
    ET.SubElement(root, "rect", x="0", y="0", width=_fmt(width), height=_fmt(height),
                  fill=BACKGROUND)

    surfaces = ET.SubElement(root, "g", id="road-surfaces")
    for inst in scenario.instances:
        ET.SubElement(surfaces, "path", d=path_data(inst.footprint.polygon, close=True),
                      fill=ROAD_FILL, stroke="none")

    markings = ET.SubElement(root, "g", id="lane-markings", fill="none")
    for inst in scenario.instances:
        for polyline, (color, dash, stroke_width) in _divider_lines(inst):
            attrs = {
                "d": path_data(polyline),
                "stroke": color,
                "stroke-width": _fmt(stroke_width * scale),
            }
            if dash:
                attrs["stroke-dasharray"] = " ".join(
                    _fmt(float(v) * scale) for v in dash.split()
                )
            ET.SubElement(markings, "path", **attrs)

    centers = ET.SubElement(root, "g", id="lane-centerlines", fill="none")
    for inst in scenario.instances:
        for line in inst.centerlines:
            ET.SubElement(
                centers, "path", d=path_data(line),
                stroke=CENTERLINE_STYLE["stroke"],
                **{
                    "stroke-width": _fmt(CENTERLINE_STYLE["stroke-width"] * scale),
                    "stroke-dasharray": " ".join(
                        _fmt(float(v) * scale) for v in CENTERLINE_STYLE["dasharray"].split()
                    ),
                },
            )

    endpoints = ET.SubElement(root, "g", id="endpoints")
    for inst in scenario.instances:
        for ep in inst.endpoints:
            cx, cy = px(ep.pose.position)
            tip = ep.pose.position + heading_vector(ep.pose.heading).scaled(2.0)
            tx, ty = px(tip)
            marker = ET.SubElement(endpoints, "g")
            circle = ET.SubElement(
                marker, "circle", cx=_fmt(cx), cy=_fmt(cy), r=_fmt(0.6 * scale),
                fill="none", stroke=ENDPOINT_COLOR,
            )
            circle.set("stroke-width", _fmt(0.2 * scale))
            arrow = ET.SubElement(
                marker, "path",
                d=f"M {_fmt(cx)} {_fmt(cy)} L {_fmt(tx)} {_fmt(ty)}",
                stroke=ENDPOINT_COLOR, fill="none",
            )
            arrow.set("stroke-width", _fmt(0.2 * scale))
            title = ET.SubElement(marker, "title")
            title.text = f"endpoint {ep.owner}:{ep.index} {ep.signature.label()}"

    ET.indent(root)
    return ET.tostring(root, encoding="unicode", xml_declaration=True) + "\n"
