"""Similarity ranking against a chosen configuration, plus the exploded view.

Similarity is contact-interface overlap: per protein pair the Jaccard index
of amino-acid-pair sets, averaged over the pairs present on either side.
The exploded layout translates proteins apart along their original
directions from the complex centroid until every pairwise atom distance
reaches the gap, exposing the buried contact zones.
"""

from itertools import combinations

import numpy as np
from scipy.spatial.distance import cdist

from dockdrill import build_hierarchy, cc_similarity, exploded_layout
from dockdrill.similarity import rank_by_similarity
from dockdrill.synthetic import random_ensemble

raw = random_ensemble(n_proteins=4, n_ccs=60, n_residues=24, atoms_per_residue=4,
                      seed=33, crowding=4.0)
ensemble = build_hierarchy(raw)

# pick the configuration with the richest contact interface as reference
reference_id = max(ensemble.cc_aaps, key=lambda cc_id: len(ensemble.cc_aaps[cc_id]))
reference = ensemble.configuration(reference_id)
scores = {}
for cc_id, cc in ensemble.configurations.items():
    value = cc_similarity(cc, reference)
    if value is not None:
        scores[cc_id] = value

order = rank_by_similarity(scores)
print(f"similarity to configuration {reference_id} (top 5 of {len(order)}):")
for cc_id in order[:5]:
    print(f"  {cc_id}: {scores[cc_id]:.3f}")
print(f"  ... self-similarity is exactly {scores[reference_id]:.1f}")

# explode the best non-reference candidate to look inside its interfaces
candidate = ensemble.configuration(order[1])
layout = exploded_layout(candidate.coords, gap=12.0)
print(f"\nexploded configuration {candidate.id} "
      f"(converged={layout.converged} in {layout.iterations} iterations):")
moved = {}
for name, transform in sorted(layout.transforms.items()):
    moved[name] = candidate.coords[name] + transform.translation
    shift = np.linalg.norm(transform.translation)
    print(f"  {name}: moved {shift:5.1f} A outward")

gap = min(
    cdist(moved[p], moved[q]).min() for p, q in combinations(sorted(moved), 2)
)
print(f"minimum inter-protein atom distance after explosion: {gap:.1f} A (gap 12.0)")
print("relative directions from the complex centroid are preserved, so the "
      "arrangement stays readable while the contact zones become visible")
