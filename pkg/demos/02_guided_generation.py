"""Grow complete scenarios with the guided connection algorithm.

Generates a small batch, checks every scenario against the structural
invariants (no overlaps, connected, signature-matched joints) and renders
a few results. The usage counter is shared across the batch, so templates
rotate instead of repeating.
"""

from collections import Counter
from pathlib import Path

from roadgen import (
    Constraints,
    GenerationBudget,
    default_catalog,
    generate_batch,
    to_svg,
    validate_scenario,
)

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

catalog = list(default_catalog())
constraints = Constraints()

batch = generate_batch(
    "guided", GenerationBudget.count(12), 6, constraints, catalog, seed=2025
)

kinds = Counter()
for i, scenario in enumerate(batch):
    validate_scenario(scenario, constraints.overlap_tolerance)
    kinds.update(inst.template.kind.value for inst in scenario.instances)
    flag = " (short)" if scenario.short else ""
    print(f"scenario {i:02d}: {scenario.size()} components, "
          f"{len(scenario.connections)} connections{flag}")

print("\nkind usage across the batch:")
for kind, count in kinds.most_common():
    print(f"  {kind:15s} {count}")

for i in range(3):
    path = OUT / f"guided_scenario_{i}.svg"
    path.write_text(to_svg(batch[i], scale=3.0))
    print(f"rendered {path.name}")
