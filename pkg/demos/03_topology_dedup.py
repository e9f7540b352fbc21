"""Topology similarity and deduplication.

Maps scenarios to undirected kind-labeled graphs, scores pairwise
similarity (the fraction of vertices whose incident connection types all
reappear in the other graph) and filters exact topology duplicates.
"""

from roadgen import (
    Constraints,
    GenerationBudget,
    default_catalog,
    deduplicate,
    generate_batch,
    similarity,
    to_graph,
    uniqueness_rate,
)

catalog = list(default_catalog())
batch = generate_batch(
    "guided", GenerationBudget.count(40), 4, Constraints(), catalog, seed=99
)

graphs = [to_graph(s) for s in batch]
print("pairwise similarity of the first five scenarios:")
for i in range(5):
    row = " ".join(f"{similarity(graphs[i], graphs[j]):.2f}" for j in range(5))
    kinds = "-".join(inst.template.kind.value[:5] for inst in batch[i].instances)
    print(f"  s{i}: [{row}]  {kinds}")

kept = deduplicate(batch)
rate = uniqueness_rate(len(batch), len(kept))
print(f"\n{len(batch)} generated, {len(kept)} kept after dedup "
      f"(uniqueness rate {rate:.3f})")

loose = deduplicate(batch, threshold=0.8)
print(f"threshold 0.8 keeps {len(loose)} (more aggressive filtering)")
