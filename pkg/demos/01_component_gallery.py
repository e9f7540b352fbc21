"""Gallery of the eight road-component kinds.

Instantiates one template of every kind with hand-picked parameters and
renders each to an SVG in demos/output/. Open the files in a browser to
see lane markings, boundaries and the red endpoint markers where further
components could attach.
"""

import math
from pathlib import Path

from roadgen import (
    ComponentKind,
    ComponentParams,
    CurveParams,
    LaneMarking,
    Point2,
    Pose,
    RoadScenario,
    UTurnParams,
    default_catalog,
    instantiate,
    to_svg,
)

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

START = Pose(Point2(0.0, 0.0), 0.0)


def pick(kind, lanes):
    # first catalog entry of the kind with the requested lane count
    for template in default_catalog():
        if template.kind is kind and template.signature.lane_count == lanes:
            return template
    raise LookupError(kind)


def params(template, length=60.0, width=3.5):
    extra = None
    if template.kind is ComponentKind.CURVE:
        # a gentle left-hand bend built from explicit control points
        extra = CurveParams(
            p0=Point2(0, 0), p1=Point2(20, 0), p2=Point2(40, 10), p3=Point2(55, 25)
        )
    elif template.kind is ComponentKind.U_TURN:
        road = template.signature.lane_count * width
        extra = UTurnParams(leg_separation=road + 8.0, apex_extension=4.0)
    return ComponentParams(length=length, lane_width=width, start=START, kind_specific=extra)


for kind, lanes in [
    (ComponentKind.STRAIGHT, 3),
    (ComponentKind.CURVE, 2),
    (ComponentKind.LANE_SWITCH, 2),
    (ComponentKind.FORK, 2),
    (ComponentKind.T_INTERSECTION, 2),
    (ComponentKind.INTERSECTION, 2),
    (ComponentKind.U_TURN, 2),
    (ComponentKind.ROUNDABOUT, 2),
]:
    template = pick(kind, lanes)
    instance = instantiate(template, params(template)).owned_by(0)
    scenario = RoadScenario(instances=(instance,), connections=(), seed=0)
    path = OUT / f"component_{kind.value}.svg"
    path.write_text(to_svg(scenario, scale=6.0))
    print(
        f"{kind.value:15s} lanes={template.signature.lane_count} "
        f"endpoints={len(instance.endpoints)} "
        f"footprint={instance.footprint.area:8.1f} m^2  -> {path.name}"
    )

print(f"\nwrote gallery to {OUT}")
