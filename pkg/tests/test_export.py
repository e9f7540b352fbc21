import json
import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from roadgen.components import (
    ComponentKind,
    ComponentParams,
    LaneMarking,
    default_catalog,
    instantiate,
)
from roadgen.errors import ParseError, ValidationError
from roadgen.export import (
    ROADMARK_STYLE,
    from_json,
    load_document,
    to_json,
    to_opendrive,
    to_svg,
    validate_opendrive,
)
from roadgen.generation import (
    Connection,
    Constraints,
    RoadScenario,
    UsageCounter,
    generate_scenario,
)
from roadgen.geometry import Point2, Pose

from test_components import find_template, params_for


def rng_from(seed):
    return np.random.Generator(np.random.PCG64(seed))


def scenario_of(size, seed):
    return generate_scenario(
        list(default_catalog()), size, Constraints(), UsageCounter(), rng_from(seed), seed=seed
    )


def single_instance_scenario(kind=ComponentKind.STRAIGHT, lanes=2,
                             marking=LaneMarking.WHITE_DASHED, length=50.0):
    template = find_template(kind, lanes=lanes, marking=marking,
                             bidirectional=kind is ComponentKind.U_TURN)
    inst = instantiate(template, params_for(template, length=length)).owned_by(0)
    return RoadScenario(instances=(inst,), connections=(), seed=0)


# --------------------------------------------------------------------------
# JSON
# --------------------------------------------------------------------------


def test_minimal_document_parses_back():
    scenario = single_instance_scenario()
    assert from_json(to_json(scenario)) == scenario


@pytest.mark.parametrize("seed", [3, 14, 15])
def test_round_trip_identity_on_generated_scenarios(seed):
    scenario = scenario_of(6, seed)
    assert from_json(to_json(scenario)) == scenario


def test_serialization_is_byte_deterministic():
    scenario = scenario_of(5, 92)
    assert to_json(scenario) == to_json(scenario)


def test_reals_carry_at_most_nine_significant_digits():
    text = to_json(scenario_of(6, 65))
    doc = json.loads(text)
    for row in doc["instances"]:
        for value in (row["params"]["length"], row["params"]["lane_width"],
                      row["params"]["start"]["x"], row["params"]["start"]["heading"]):
            assert value == float(f"{value:.9g}")


def test_truncated_text_is_a_parse_error():
    text = to_json(single_instance_scenario())
    with pytest.raises(ParseError):
        from_json(text[: len(text) // 2])


def test_wrong_schema_version_is_a_parse_error():
    text = to_json(single_instance_scenario())
    doc = json.loads(text)
    doc["schema_version"] = "99"
    with pytest.raises(ParseError):
        from_json(json.dumps(doc))


def test_catalog_hash_mismatch_is_flagged():
    text = to_json(single_instance_scenario())
    doc = json.loads(text)
    doc["metadata"]["catalog_hash"] = "0" * 64
    with pytest.raises(ValidationError) as exc:
        from_json(json.dumps(doc))
    assert exc.value.invariant == "catalog-hash"


def test_overlapping_instances_fail_no_overlap_validation():
    template = find_template(ComponentKind.STRAIGHT)
    inst = instantiate(template, params_for(template, length=50.0))
    # Second instance placed on top of the first, "connected" at endpoint 0.
    overlapping = RoadScenario(
        instances=(inst.owned_by(0), inst.owned_by(1)),
        connections=(Connection(from_instance=0, from_endpoint=0, to_instance=1),),
        seed=0,
    )
    text = to_json(overlapping)
    with pytest.raises(ValidationError) as exc:
        from_json(text)
    assert exc.value.invariant == "no-overlap"


def test_document_metadata_round_trip():
    scenario = scenario_of(4, 44)
    text = to_json(scenario, mode="random", overlap_tolerance=0.07)
    doc = load_document(text)
    assert doc.mode == "random"
    assert doc.overlap_tolerance == 0.07
    assert doc.scenario.seed == scenario.seed


# --------------------------------------------------------------------------
# OpenDRIVE
# --------------------------------------------------------------------------


def test_single_straight_road_structure():
    scenario = single_instance_scenario(length=50.0)
    root = ET.fromstring(to_opendrive(scenario))
    roads = root.findall("road")
    assert len(roads) == 1
    assert float(roads[0].get("length")) == pytest.approx(50.0)
    section = roads[0].find("lanes/laneSection")
    assert section.find("center/lane[@id='0']") is not None
    right = section.findall("right/lane")
    assert [lane.get("id") for lane in right] == ["-1", "-2"]  # 2-lane one-way
    assert section.find("left") is None or not section.findall("left/lane")


def test_white_dashed_maps_to_broken_white():
    assert ROADMARK_STYLE[LaneMarking.WHITE_DASHED] == ("broken", "white")
    scenario = single_instance_scenario(marking=LaneMarking.WHITE_DASHED)
    root = ET.fromstring(to_opendrive(scenario))
    inner = root.find("road/lanes/laneSection/right/lane[@id='-1']/roadMark")
    assert inner.get("type") == "broken"
    assert inner.get("color") == "white"


def test_one_junction_element_per_intersection():
    scenario = single_instance_scenario(kind=ComponentKind.INTERSECTION)
    root = ET.fromstring(to_opendrive(scenario))
    assert len(root.findall("junction")) == 1
    assert len(root.findall("road")) == 2  # main chain + cross chain


def test_bezier_emitted_as_param_poly3():
    scenario = single_instance_scenario(kind=ComponentKind.CURVE)
    root = ET.fromstring(to_opendrive(scenario))
    assert root.find("road/planView/geometry/paramPoly3") is not None


def test_roundabout_ring_emitted_as_arc():
    scenario = single_instance_scenario(kind=ComponentKind.ROUNDABOUT)
    root = ET.fromstring(to_opendrive(scenario))
    arcs = root.findall("road/planView/geometry/arc")
    assert len(arcs) == 1
    ring_road = root.findall("road")[-1]
    curvature = float(ring_road.find("planView/geometry/arc").get("curvature"))
    length = float(ring_road.find("planView/geometry").get("length"))
    assert curvature * length == pytest.approx(2.0 * math.pi, rel=1e-6)


def test_connections_become_link_pairs():
    scenario = scenario_of(6, 77)
    text = to_opendrive(scenario)
    assert validate_opendrive(text, scenario) == []


def test_validator_rejects_garbage():
    assert validate_opendrive("<not-xml") != []
    assert validate_opendrive("<OpenDRIVE></OpenDRIVE>") != []  # header missing
    mangled = to_opendrive(single_instance_scenario()).replace('length="50"', 'length="-1"')
    assert validate_opendrive(mangled) != []


def test_opendrive_is_deterministic():
    scenario = scenario_of(5, 31)
    assert to_opendrive(scenario) == to_opendrive(scenario)


# --------------------------------------------------------------------------
# SVG
# --------------------------------------------------------------------------


def test_svg_is_well_formed_and_draws_the_straight():
    scenario = single_instance_scenario()
    root = ET.fromstring(to_svg(scenario))
    ns = {"svg": "http://www.w3.org/2000/svg"}
    surfaces = root.find("svg:g[@id='road-surfaces']", ns)
    assert len(surfaces.findall("svg:path", ns)) == 1
    markings = root.find("svg:g[@id='lane-markings']", ns)
    assert len(markings.findall("svg:path", ns)) >= 3  # divider + both edges
    endpoints = root.find("svg:g[@id='endpoints']", ns)
    assert len(endpoints.findall("svg:g", ns)) == 1


def test_svg_scales_coordinates_uniformly():
    scenario = scenario_of(4, 51)
    ns = {"svg": "http://www.w3.org/2000/svg"}

    def first_path_coords(text):
        root = ET.fromstring(text)
        path = root.find("svg:g[@id='road-surfaces']/svg:path", ns)
        tokens = path.get("d").replace("M", " ").replace("L", " ").replace("Z", " ").split()
        return [float(t) for t in tokens]

    one = first_path_coords(to_svg(scenario, scale=1.0))
    two = first_path_coords(to_svg(scenario, scale=2.0))
    assert len(one) == len(two)
    # coordinates are written with 9 significant digits (rel error <= 5e-9)
    for a, b in zip(one, two):
        assert b == pytest.approx(2.0 * a, rel=1e-8, abs=1e-8)


def test_svg_rejects_bad_scale():
    with pytest.raises(ValueError):
        to_svg(single_instance_scenario(), scale=0.0)


def test_svg_is_deterministic():
    scenario = scenario_of(4, 13)
    assert to_svg(scenario) == to_svg(scenario)
