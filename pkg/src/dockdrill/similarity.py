"""Similarity of configurations to a designated primary, via contact overlap.

The metric is the Jaccard index of amino-acid-pair key sets: identical
interfaces score 1, disjoint interfaces 0. Configuration-level similarity
averages the pairwise scores over every protein pair that has an interface
on at least one side; pairs outside a partial reference's protein coverage
are excluded from the mean rather than zeroed. The metric lives behind
`ppc_similarity` so it can be swapped wholesale.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .errors import InputError
from .hierarchy import (
    AAPKey,
    ComplexConfiguration,
    ComplexEnsemble,
    PairKey,
    Reference,
    pair_key,
)

__all__ = [
    "jaccard",
    "ppc_similarity",
    "cc_similarity",
    "rank_by_similarity",
    "rank_candidates",
    "similarity_column",
    "contact_zone_model",
    "SIMILARITY_PROPERTY",
]

# name of the synthetic property column fed to the property view and filters
SIMILARITY_PROPERTY = "similarity_to_primary"


def jaccard(a: frozenset, b: frozenset) -> float:
    if not a and not b:
        return 1.0
    union = len(a | b)
    return len(a & b) / union


def _ppc_keys(side: ComplexConfiguration | Reference, pair: PairKey) -> frozenset[AAPKey] | None:
    if isinstance(side, Reference):
        return side.ppc_keys.get(pair)
    ppc = side.ppcs.get(pair)
    return None if ppc is None else ppc.aap_keys


def _side_proteins(side: ComplexConfiguration | Reference) -> frozenset[str]:
    if isinstance(side, Reference):
        return side.proteins
    return frozenset(side.coords)


def ppc_similarity(keys_a: frozenset[AAPKey], keys_b: frozenset[AAPKey]) -> float:
    """Interface overlap of two pair configurations of the same protein pair."""
    pairs_a = {(k[0][0], k[1][0]) for k in keys_a}
    pairs_b = {(k[0][0], k[1][0]) for k in keys_b}
    if len(pairs_a | pairs_b) > 1:
        raise InputError("pair configurations belong to different protein pairs")
    return jaccard(keys_a, keys_b)


def cc_similarity(
    a: ComplexConfiguration | Reference, b: ComplexConfiguration | Reference
) -> float | None:
    """Mean interface overlap over the comparable protein pairs.

    Comparable pairs are those within both sides' protein sets that have an
    interface in at least one side; a pair with an interface on only one
    side contributes 0. Returns None when no pair is comparable."""
    shared = _side_proteins(a) & _side_proteins(b)
    pairs: set[PairKey] = set()
    for side in (a, b):
        source = side.ppc_keys if isinstance(side, Reference) else {
            pair: ppc.aap_keys for pair, ppc in side.ppcs.items()
        }
        for pair in source:
            if pair[0] in shared and pair[1] in shared:
                pairs.add(pair)
    if not pairs:
        return None
    total = 0.0
    for pair in pairs:
        keys_a = _ppc_keys(a, pair) or frozenset()
        keys_b = _ppc_keys(b, pair) or frozenset()
        total += jaccard(keys_a, keys_b) if (keys_a or keys_b) else 1.0
    return total / len(pairs)


def rank_by_similarity(scores: Mapping[str, float]) -> list[str]:
    """Ids ordered by descending score, ties broken by ascending id."""
    return sorted(scores, key=lambda cc_id: (-scores[cc_id], cc_id))


def rank_candidates(
    candidates: Iterable[ComplexConfiguration],
    reference: ComplexConfiguration | Reference,
) -> list[str]:
    """Candidate configurations ordered by descending similarity to the
    designated reference; candidates with no comparable pair are dropped."""
    scores: dict[str, float] = {}
    for cc in candidates:
        value = cc_similarity(cc, reference)
        if value is not None:
            scores[cc.id] = value
    return rank_by_similarity(scores)


def similarity_column(
    ensemble: ComplexEnsemble,
    reference: ComplexConfiguration | Reference,
) -> dict[str, dict[str, float]]:
    """The similarity score of every configuration against the reference, in
    the shape of an extra property table (cc id -> {column: value}).
    Configurations with no comparable pair simply lack the column."""
    out: dict[str, dict[str, float]] = {}
    for cc_id, cc in ensemble.configurations.items():
        value = cc_similarity(cc, reference)
        if value is not None:
            out[cc_id] = {SIMILARITY_PROPERTY: value}
    return out


def contact_zone_model(
    ensemble: ComplexEnsemble,
    pair: tuple[str, str],
    reference_keys: frozenset[AAPKey],
    candidate_ccs: list[str],
    reference_label: str = "reference",
) -> dict:
    """Side-by-side comparison data for selected pair configurations.

    Every candidate lists its contact amino acids per protein, its overlap
    score against the reference, and which amino acids / pairs it shares
    with the reference versus which reference elements it misses. The
    candidate list is ordered by descending similarity (ties by id)."""
    p, q = pair_key(*pair)
    ppe = ensemble.ppe(p, q)

    def column(keys: frozenset[AAPKey], label: str) -> dict:
        side_p = sorted({k[0][1] for k in keys})
        side_q = sorted({k[1][1] for k in keys})
        shared_keys = keys & reference_keys
        shared_aas = {aa for k in shared_keys for aa in k}
        missing_keys = reference_keys - keys
        return {
            "label": label,
            "aas": {
                p: [_aa_entry(ensemble, (p, s), shared_aas) for s in side_p],
                q: [_aa_entry(ensemble, (q, s), shared_aas) for s in side_q],
            },
            "aaps": [
                {
                    "key": _key_entry(k),
                    "shared": k in shared_keys,
                }
                for k in sorted(keys)
            ],
            "missing_from_reference": [_key_entry(k) for k in sorted(missing_keys)],
            "similarity": jaccard(keys, reference_keys),
        }

    scores: dict[str, float] = {}
    for cc_id in candidate_ccs:
        ppc = ppe.ppcs.get(cc_id)
        scores[cc_id] = jaccard(ppc.aap_keys if ppc else frozenset(), reference_keys)
    ordered = rank_by_similarity(scores)

    return {
        "pair": [p, q],
        "reference": column(reference_keys, reference_label),
        "candidates": [
            column(
                ppe.ppcs[cc_id].aap_keys if cc_id in ppe.ppcs else frozenset(),
                cc_id,
            )
            for cc_id in ordered
        ],
        "order": ordered,
    }


def _aa_entry(ensemble: ComplexEnsemble, aa_id, shared_aas) -> dict:
    aa = ensemble.amino_acid(aa_id)
    return {
        "seq": aa.residue_seq,
        "name": aa.residue_name,
        "hydrophobicity": aa.hydrophobicity,
        "charge": aa.charge,
        "shared": aa_id in shared_aas,
    }


def _key_entry(key: AAPKey) -> list:
    return [[key[0][0], key[0][1]], [key[1][0], key[1][1]]]
