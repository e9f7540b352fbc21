"""The three export formats for one scenario.

Writes canonical JSON (lossless round-trip), an OpenDRIVE-subset .xodr
(checked by the bundled validator) and an SVG rendering.
"""

from pathlib import Path

from roadgen import (
    Constraints,
    GenerationBudget,
    default_catalog,
    from_json,
    generate_batch,
    to_json,
    to_opendrive,
    to_svg,
    validate_opendrive,
)

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

catalog = list(default_catalog())
scenario = generate_batch(
    "guided", GenerationBudget.count(1), 6, Constraints(), catalog, seed=31415
)[0]

json_text = to_json(scenario)
(OUT / "example.json").write_text(json_text)
assert from_json(json_text) == scenario
print(f"JSON: {len(json_text)} bytes, round-trip exact")

xodr_text = to_opendrive(scenario)
(OUT / "example.xodr").write_text(xodr_text)
issues = validate_opendrive(xodr_text, scenario)
print(f"OpenDRIVE: {xodr_text.count('<road ')} roads, "
      f"{xodr_text.count('<junction ')} junctions, "
      f"validator issues: {issues or 'none'}")

svg_text = to_svg(scenario, scale=4.0)
(OUT / "example.svg").write_text(svg_text)
print(f"SVG: {len(svg_text)} bytes -> {OUT / 'example.svg'}")

print("\nscenario composition:")
for i, inst in enumerate(scenario.instances):
    print(f"  {i}: {inst.template.label()}")
