"""View aggregates over the visible part of the ensemble.

Every function here is a pure function of (ensemble, visible cc-id set) and
returns JSON-serializable payload data plus, where cells aggregate multiple
configurations, a `cell_support` map (cell key -> supporting visible cc ids)
that the filter layer turns into affected-by-disabled marks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InputError
from .hierarchy import AAPKey, ComplexEnsemble, ProteinPairEnsemble, pair_key

__all__ = [
    "PPEAggregate",
    "ppe_aggregate",
    "overview_model",
    "ProteinViewModel",
    "protein_view_model",
    "ResidueMatrixModel",
    "residue_matrix_model",
    "CONDENSED_RUN_LIMIT",
]

# Non-interacting residue runs strictly longer than this collapse to a gap
# marker in the condensed protein view; runs of exactly this length stay.
CONDENSED_RUN_LIMIT = 25

SORT_MODES = ("sequence", "frequency", "hydrophobicity", "charge")
_CHARGE_ORDER = {"positive": 0, "negative": 1, "neutral": 2}


@dataclass(frozen=True)
class PPEAggregate:
    """Interface statistics of one protein pair ensemble over the visible
    configurations. `consistency` is the mean presence fraction of the
    interface's unique amino-acid pairs: 1.0 exactly when every visible PPC
    has the same contact interface, absent (None) when nothing is visible.
    """

    n_unique_aap: int
    per_aap_presence: dict[AAPKey, float]
    consistency: float | None
    n_ppcs: int


def ppe_aggregate(ppe: ProteinPairEnsemble, visible_ccs: frozenset[str] | set[str]) -> PPEAggregate:
    visible_ppcs = [ppc for cc_id, ppc in ppe.ppcs.items() if cc_id in visible_ccs]
    n_ppcs = len(visible_ppcs)
    if n_ppcs == 0:
        return PPEAggregate(0, {}, None, 0)
    counts: dict[AAPKey, int] = {}
    for ppc in visible_ppcs:
        for key in ppc.aap_keys:
            counts[key] = counts.get(key, 0) + 1
    presence = {key: c / n_ppcs for key, c in counts.items()}
    consistency = sum(presence.values()) / len(presence)
    return PPEAggregate(len(presence), presence, consistency, n_ppcs)


def overview_model(
    ensemble: ComplexEnsemble,
    visible_ccs: frozenset[str] | set[str],
    scaling: str = "independent",
    affected_ccs: frozenset[str] | set[str] = frozenset(),
) -> dict:
    """Node/edge data for the ensemble overview graph.

    Nodes carry one (interface size, consistency) bar pair per partner
    protein; edge weights count the visible configurations where the pair
    contacts. `*_unaffected` values are recomputed over visible minus the
    configurations attributed to disabled filters, so a UI can grey the
    difference; `weight_total` ignores filtering entirely.
    """
    if scaling not in ("independent", "absolute"):
        raise InputError(f"unknown scaling mode {scaling!r}")
    visible = frozenset(visible_ccs)
    affected = frozenset(affected_ccs) & visible
    unaffected = visible - affected

    aggregates = {pair: ppe_aggregate(ppe, visible) for pair, ppe in ensemble.ppes.items()}
    agg_unaffected = (
        {pair: ppe_aggregate(ppe, unaffected) for pair, ppe in ensemble.ppes.items()}
        if affected
        else aggregates
    )

    global_max = max((a.n_unique_aap for a in aggregates.values()), default=0)
    nodes = []
    for name, template in ensemble.proteins.items():
        partners = sorted(
            {q for pair in ensemble.ppes if name in pair for q in pair} - {name}
        )
        sizes = {
            q: aggregates[pair_key(name, q)].n_unique_aap for q in partners
        }
        local_max = max(sizes.values(), default=0)
        denom = local_max if scaling == "independent" else global_max
        interfaces = []
        for q in partners:
            agg = aggregates[pair_key(name, q)]
            agg_u = agg_unaffected[pair_key(name, q)]
            interfaces.append(
                {
                    "partner": q,
                    "size": agg.n_unique_aap,
                    "size_norm": (agg.n_unique_aap / denom) if denom else 0.0,
                    "consistency": agg.consistency,
                    "size_unaffected": agg_u.n_unique_aap,
                    "consistency_unaffected": agg_u.consistency,
                    "n_ppcs": agg.n_ppcs,
                }
            )
        nodes.append(
            {
                "protein": name,
                "color_index": template.color_index,
                "n_residues": template.n_residues,
                "interfaces": interfaces,
            }
        )

    edges = []
    for pair in sorted(ensemble.ppes):
        all_ccs = ensemble.pair_ccs[pair]
        edges.append(
            {
                "pair": list(pair),
                "weight": len(all_ccs & visible),
                "weight_total": len(all_ccs),
                "weight_affected": len(all_ccs & affected),
            }
        )
    return {
        "scaling": scaling,
        "consistency_reference": 1.0,
        "nodes": nodes,
        "edges": edges,
    }


@dataclass
class ProteinViewModel:
    """Per-amino-acid interaction frequencies of one primary protein.

    `entries` lists retained residues and gap markers in sequence order;
    `partners` holds one count row per partner protein aligned to `entries`
    (None under gap markers). Total counts are the column sums of the
    partner rows: each amino-acid pair counts once per visible configuration
    it appears in.
    """

    primary: str
    condensed: bool
    entries: list[dict]
    partners: list[dict]
    ruler: list[int]
    cell_support: dict[tuple, frozenset[str]] = field(default_factory=dict)

    def payload(self, marks: dict[tuple, str] | None = None) -> dict:
        marks = marks or {}
        return {
            "primary": self.primary,
            "condensed": self.condensed,
            "ruler": self.ruler,
            "entries": [
                {**e, "mark": marks.get(("total", e["seq"]), "normal")}
                if e["kind"] == "aa"
                else e
                for e in self.entries
            ],
            "partners": [
                {
                    **row,
                    "marks": [
                        marks.get((row["protein"], e["seq"]), "normal")
                        if e["kind"] == "aa"
                        else None
                        for e in self.entries
                    ],
                }
                for row in self.partners
            ],
        }


def protein_view_model(
    ensemble: ComplexEnsemble,
    primary: str,
    visible_ccs: frozenset[str] | set[str],
    condensed: bool = False,
) -> ProteinViewModel:
    template = ensemble.protein(primary)
    visible = frozenset(visible_ccs)

    partners = sorted(
        q for pair in ensemble.ppes if primary in pair for q in pair if q != primary
    )
    seq_index = {seq: i for i, seq in enumerate(template.residue_seqs)}
    n_res = template.n_residues
    totals = [0] * n_res
    per_partner: dict[str, list[int]] = {q: [0] * n_res for q in partners}
    support: dict[tuple, set[str]] = {}

    for q in partners:
        ppe = ensemble.ppes[pair_key(primary, q)]
        row = per_partner[q]
        for cc_id, ppc in ppe.ppcs.items():
            if cc_id not in visible:
                continue
            for key in ppc.aap_keys:
                aa = key[0] if key[0][0] == primary else key[1]
                idx = seq_index[aa[1]]
                row[idx] += 1
                totals[idx] += 1
                support.setdefault((q, aa[1]), set()).add(cc_id)
                support.setdefault(("total", aa[1]), set()).add(cc_id)

    # condensed view: collapse maximal non-interacting runs longer than the
    # limit into gap markers; runs of exactly the limit are retained
    keep = [True] * n_res
    if condensed:
        i = 0
        while i < n_res:
            if totals[i] == 0:
                j = i
                while j < n_res and totals[j] == 0:
                    j += 1
                if j - i > CONDENSED_RUN_LIMIT:
                    for k in range(i, j):
                        keep[k] = False
                i = j
            else:
                i += 1

    entries: list[dict] = []
    i = 0
    while i < n_res:
        if keep[i]:
            entries.append(
                {
                    "kind": "aa",
                    "seq": template.residue_seqs[i],
                    "name": template.residue_names[i],
                    "total": totals[i],
                    "hydrophobicity": template.residue_hydrophobicity(i),
                    "charge": template.residue_charge(i),
                }
            )
            i += 1
        else:
            j = i
            while j < n_res and not keep[j]:
                j += 1
            entries.append(
                {
                    "kind": "gap",
                    "from_seq": template.residue_seqs[i],
                    "to_seq": template.residue_seqs[j - 1],
                    "length": j - i,
                }
            )
            i = j

    partner_rows = [
        {
            "protein": q,
            "color_index": ensemble.protein(q).color_index,
            "counts": [
                per_partner[q][seq_index[e["seq"]]] if e["kind"] == "aa" else None
                for e in entries
            ],
        }
        for q in partners
    ]
    ruler = [e["seq"] for e in entries if e["kind"] == "aa" and e["seq"] % 10 == 0]
    return ProteinViewModel(
        primary=primary,
        condensed=condensed,
        entries=entries,
        partners=partner_rows,
        ruler=ruler,
        cell_support={k: frozenset(v) for k, v in support.items()},
    )


@dataclass
class ResidueMatrixModel:
    """Frequency matrix of amino-acid pairs of one protein pair ensemble:
    cell value = number of visible configurations containing the pair."""

    pair: tuple[str, str]
    sort: str
    rows: list[dict]  # axis amino acids of the first protein (name order)
    cols: list[dict]
    cells: dict[tuple[int, int], int]  # (row seq, col seq) -> count
    cell_support: dict[tuple, frozenset[str]] = field(default_factory=dict)

    def payload(self, marks: dict[tuple, str] | None = None) -> dict:
        marks = marks or {}
        return {
            "pair": list(self.pair),
            "sort": self.sort,
            "rows": self.rows,
            "cols": self.cols,
            "cells": [
                {
                    "row_seq": rs,
                    "col_seq": cs,
                    "count": count,
                    "mark": marks.get((rs, cs), "normal"),
                }
                for (rs, cs), count in sorted(self.cells.items())
            ],
        }


def _axis_order(axis: list[dict], sort: str) -> list[dict]:
    if sort == "sequence":
        key = lambda aa: (aa["seq"],)
    elif sort == "frequency":
        key = lambda aa: (-aa["frequency"], aa["seq"])
    elif sort == "hydrophobicity":
        key = lambda aa: (-aa["hydrophobicity"], aa["seq"])
    elif sort == "charge":
        key = lambda aa: (_CHARGE_ORDER[aa["charge"]], aa["seq"])
    else:
        raise InputError(f"unknown sort mode {sort!r}; expected one of {SORT_MODES}")
    return sorted(axis, key=key)


def residue_matrix_model(
    ensemble: ComplexEnsemble,
    pair: tuple[str, str],
    visible_ccs: frozenset[str] | set[str],
    sort: str = "sequence",
) -> ResidueMatrixModel:
    p, q = pair_key(*pair)
    ppe = ensemble.ppe(p, q)
    visible = frozenset(visible_ccs)

    cells: dict[tuple[int, int], int] = {}
    support: dict[tuple, set[str]] = {}
    for cc_id, ppc in ppe.ppcs.items():
        if cc_id not in visible:
            continue
        for key in ppc.aap_keys:
            cell = (key[0][1], key[1][1])
            cells[cell] = cells.get(cell, 0) + 1
            support.setdefault(cell, set()).add(cc_id)

    def axis(protein: str, position: int) -> list[dict]:
        freq: dict[int, int] = {}
        for (rs, cs), count in cells.items():
            seq = rs if position == 0 else cs
            freq[seq] = freq.get(seq, 0) + count
        out = []
        for seq, frequency in freq.items():
            aa = ensemble.amino_acid((protein, seq))
            out.append(
                {
                    "seq": seq,
                    "name": aa.residue_name,
                    "frequency": frequency,
                    "hydrophobicity": aa.hydrophobicity,
                    "charge": aa.charge,
                }
            )
        return _axis_order(out, sort)

    return ResidueMatrixModel(
        pair=(p, q),
        sort=sort,
        rows=axis(p, 0),
        cols=axis(q, 1),
        cells=cells,
        cell_support={k: frozenset(v) for k, v in support.items()},
    )
