"""Session state: one ensemble + filter queue + selection + primaries.

A session is single-writer: every mutation runs under the session lock,
bumps the generation counter, and swaps in a freshly computed immutable
snapshot (visibility partition plus the similarity property overlay).
Readers grab the current snapshot once and compute payloads from it, so a
concurrent mutation can never produce a half-updated response.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

import numpy as np
from pathlib import Path

from . import filters as flt
from .aggregates import (
    overview_model,
    ppe_aggregate,
    protein_view_model,
    residue_matrix_model,
)
from .errors import InputError, UnknownEntityError
from .hierarchy import (
    AAPKey,
    ComplexEnsemble,
    Reference,
    aap_key,
    build_hierarchy,
    pair_key,
)
from .ingest import (
    ChainMapping,
    PropertyTable,
    load_ensemble,
    load_reference_configuration,
    read_mapping_file,
    read_property_table,
)
from .similarity import (
    SIMILARITY_PROPERTY,
    contact_zone_model,
    similarity_column,
)
from .spatial import (
    DEFAULT_ISO_FRACTION,
    DEFAULT_SPACING,
    compute_density,
    exploded_layout,
    extract_isosurface,
)

__all__ = ["Session", "subject_from_json"]


def subject_from_json(data: dict) -> flt.SubjectSpec:
    """Build a filter subject from its wire form.

    Explicit subjects: {"level": "cc", "ids": [...]}, {"level": "ppe",
    "pair": [p, q]}, {"level": "ppc", "ids": [[[p, q], cc], ...]},
    {"level": "aap", "keys": [[[p, seq], [q, seq]], ...]}, {"level": "aa",
    "ids": [[p, seq], ...]}. Ranges: {"level": ..., "property": name,
    "min": lo, "max": hi, "scope": [...]} (bounds optional)."""
    level = data.get("level")
    if level not in flt.LEVELS:
        raise InputError(f"unknown subject level {level!r}")
    if "property" in data:
        lo = float(data.get("min", float("-inf")))
        hi = float(data.get("max", float("inf")))
        scope = tuple(data["scope"]) if data.get("scope") else None
        return flt.SubjectSpec.property_range(
            str(data["property"]), lo, hi, level=level, scope=scope
        )
    if level == "cc":
        return flt.SubjectSpec.ccs(str(i) for i in data.get("ids", []))
    if level == "ppe":
        if "pair" in data:
            p, q = data["pair"]
            return flt.SubjectSpec.pair_contact(str(p), str(q))
        pairs = [pair_key(str(p), str(q)) for p, q in data.get("pairs", [])]
        return flt.SubjectSpec(level="ppe", pairs=frozenset(pairs))
    if level == "ppc":
        ids = [
            (pair_key(str(p), str(q)), str(cc)) for (p, q), cc in data.get("ids", [])
        ]
        return flt.SubjectSpec.ppcs(ids)
    if level == "aap":
        keys = [
            aap_key((str(a[0]), int(a[1])), (str(b[0]), int(b[1])))
            for a, b in data.get("keys", [])
        ]
        return flt.SubjectSpec.aaps(keys)
    ids = [(str(p), int(seq)) for p, seq in data.get("ids", [])]
    return flt.SubjectSpec.aas(ids)


def _subject_json(spec: flt.SubjectSpec) -> dict:
    out: dict = {"level": spec.level}
    if spec.prop is not None:
        out.update({"property": spec.prop, "min": spec.lo, "max": spec.hi})
        if spec.scope:
            out["scope"] = list(spec.scope)
        return out
    if spec.level == "cc":
        out["ids"] = sorted(spec.cc_ids)
    elif spec.level == "ppe":
        out["pairs"] = [list(p) for p in sorted(spec.pairs)]
    elif spec.level == "ppc":
        out["ids"] = [[list(pair), cc] for pair, cc in sorted(spec.ppc_ids)]
    elif spec.level == "aap":
        out["keys"] = [
            [[a[0], a[1]], [b[0], b[1]]] for a, b in sorted(spec.aap_keys)
        ]
    else:
        out["ids"] = [[p, s] for p, s in sorted(spec.aa_ids)]
    return out


@dataclass
class Snapshot:
    generation: int
    visibility: flt.VisibilityState
    extra_properties: dict[str, dict[str, float]] = field(default_factory=dict)


class Session:
    def __init__(self, session_id: str):
        self.id = session_id
        self.generation = 0
        self.ensemble: ComplexEnsemble | None = None
        self.queue: flt.FilterQueue | None = None
        self.selection = flt.Selection()
        self.expanded: flt.Selection | None = None
        self.reference: Reference | None = None
        self._lock = threading.RLock()
        self._snapshot: Snapshot | None = None
        self._density_cache: dict[tuple, dict] = {}

    # -- mutations (serialize through the lock, swap snapshot) -----------

    def _require_ensemble(self) -> ComplexEnsemble:
        if self.ensemble is None:
            raise InputError("no ensemble loaded in this session")
        return self.ensemble

    def _refresh(self) -> Snapshot:
        """Recompute the snapshot; callers must hold the lock."""
        ensemble = self._require_ensemble()
        extra: dict[str, dict[str, float]] = {}
        ref = self._similarity_reference()
        if ref is not None:
            extra = similarity_column(ensemble, ref)
        visibility = flt.evaluate(self.queue, ensemble, extra)
        self.generation += 1
        snapshot = Snapshot(self.generation, visibility, extra)
        self._snapshot = snapshot
        self._density_cache.clear()
        return snapshot

    def _similarity_reference(self):
        if self.selection.primary_cc is not None:
            return self.ensemble.configuration(self.selection.primary_cc)
        return self.reference

    def load(
        self,
        input_path: str | Path,
        mapping: ChainMapping | str | Path,
        properties: PropertyTable | str | Path | None = None,
        cutoff: float = 5.0,
        include_hetatm: bool = False,
        include_hydrogens: bool = False,
        threads: int = 1,
    ) -> Snapshot:
        """(Re)load an ensemble. Reloading clears filters and selections."""
        if not isinstance(mapping, ChainMapping):
            mapping = read_mapping_file(mapping)
        if properties is not None and not isinstance(properties, PropertyTable):
            properties = read_property_table(properties)
        raw = load_ensemble(
            input_path,
            mapping,
            properties,
            include_hetatm=include_hetatm,
            include_hydrogens=include_hydrogens,
            threads=threads,
        )
        ensemble = build_hierarchy(raw, cutoff=cutoff, threads=threads)
        with self._lock:
            self.ensemble = ensemble
            self.queue = flt.FilterQueue(ensemble.all_cc_ids)
            self.selection = flt.Selection()
            self.expanded = None
            self.reference = None
            return self._refresh()

    def adopt(self, ensemble: ComplexEnsemble) -> Snapshot:
        """Attach an already built ensemble (programmatic/batch use)."""
        with self._lock:
            self.ensemble = ensemble
            self.queue = flt.FilterQueue(ensemble.all_cc_ids)
            self.selection = flt.Selection()
            self.expanded = None
            self.reference = None
            return self._refresh()

    def load_reference(self, input_path: str | Path, mapping: ChainMapping | str | Path) -> Snapshot:
        ensemble = self._require_ensemble()
        if not isinstance(mapping, ChainMapping):
            mapping = read_mapping_file(mapping)
        structure = load_reference_configuration(
            input_path, mapping, set(ensemble.proteins)
        )
        with self._lock:
            self.reference = ensemble.make_reference(structure)
            return self._refresh()

    def add_filter(self, kind: str, subject: flt.SubjectSpec) -> tuple[flt.FilterRecord, Snapshot]:
        ensemble = self._require_ensemble()
        with self._lock:
            snap = self.snapshot()
            flt.resolve_subject(subject, ensemble, snap.extra_properties)  # validate
            record = self.queue.add_filter(kind, subject)
            return record, self._refresh()

    def set_range(self, filter_id: int, lo: float, hi: float) -> Snapshot:
        with self._lock:
            self._require_ensemble()
            self.queue.set_range(filter_id, lo, hi)
            return self._refresh()

    def set_filter_enabled(self, filter_id: int, enabled: bool) -> Snapshot:
        with self._lock:
            self._require_ensemble()
            self.queue.set_enabled(filter_id, enabled)
            return self._refresh()

    def delete_filter(self, filter_id: int) -> Snapshot:
        with self._lock:
            self._require_ensemble()
            self.queue.remove_filter(filter_id)
            return self._refresh()

    def clear_filters(self) -> Snapshot:
        with self._lock:
            self._require_ensemble()
            self.queue.clear()
            return self._refresh()

    def set_selection(self, **levels) -> Snapshot:
        """Replace the explicit selection (per-level id collections)."""
        ensemble = self._require_ensemble()
        with self._lock:
            sel = flt.Selection(
                cc_ids=frozenset(levels.get("cc_ids", ())),
                ppe_pairs=frozenset(levels.get("ppe_pairs", ())),
                ppc_ids=frozenset(levels.get("ppc_ids", ())),
                aap_keys=frozenset(levels.get("aap_keys", ())),
                aa_ids=frozenset(levels.get("aa_ids", ())),
                primary_protein=self.selection.primary_protein,
                primary_ppe=self.selection.primary_ppe,
                primary_cc=self.selection.primary_cc,
                primary_ppc=self.selection.primary_ppc,
            )
            unknown = sel.cc_ids - ensemble.all_cc_ids
            if unknown:
                raise UnknownEntityError(f"unknown configuration ids: {sorted(unknown)}")
            self.selection = sel
            self.expanded = None
            return self._refresh()

    def propagate(self, down: bool = False) -> Snapshot:
        ensemble = self._require_ensemble()
        with self._lock:
            base = self.expanded if self.expanded is not None else self.selection
            self.expanded = flt.propagate_selection(base, ensemble, down=down)
            return self._refresh()

    def set_primary(
        self,
        protein: str | None = None,
        ppe: tuple[str, str] | None = None,
        cc: str | None = None,
        ppc: tuple[tuple[str, str], str] | None = None,
    ) -> Snapshot:
        ensemble = self._require_ensemble()
        with self._lock:
            sel = self.selection
            if protein is not None:
                ensemble.protein(protein)
                sel.primary_protein = protein
            if ppe is not None:
                sel.primary_ppe = pair_key(*ppe)
                ensemble.ppe(*sel.primary_ppe)
            if cc is not None:
                ensemble.configuration(cc)
                sel.primary_cc = cc
            if ppc is not None:
                pair, cc_id = pair_key(*ppc[0]), str(ppc[1])
                ppe_obj = ensemble.ppe(*pair)
                if cc_id not in ppe_obj.ppcs:
                    raise UnknownEntityError(
                        f"configuration {cc_id!r} has no {'-'.join(pair)} interface"
                    )
                sel.primary_ppc = (pair, cc_id)
            return self._refresh()

    # -- reads (lock-free against the atomic snapshot) --------------------

    def snapshot(self) -> Snapshot:
        snap = self._snapshot
        if snap is None:
            raise InputError("no ensemble loaded in this session")
        return snap

    def summary_payload(self) -> dict:
        ensemble = self._require_ensemble()
        snap = self.snapshot()
        return {
            "session": self.id,
            "generation": snap.generation,
            "proteins": [
                {
                    "name": t.name,
                    "color_index": t.color_index,
                    "chain": t.chain_id,
                    "n_residues": t.n_residues,
                }
                for t in ensemble.proteins.values()
            ],
            "cc_count": len(ensemble.all_cc_ids),
            "cutoff": ensemble.cutoff,
            "property_names": list(ensemble.property_names)
            + ([SIMILARITY_PROPERTY] if snap.extra_properties else []),
            "primary": {
                "protein": self.selection.primary_protein,
                "ppe": list(self.selection.primary_ppe)
                if self.selection.primary_ppe
                else None,
                "cc": self.selection.primary_cc,
                "ppc": [list(self.selection.primary_ppc[0]), self.selection.primary_ppc[1]]
                if self.selection.primary_ppc
                else None,
            },
        }

    def overview_payload(self, scaling: str = "independent") -> dict:
        ensemble = self._require_ensemble()
        snap = self.snapshot()
        model = overview_model(
            ensemble,
            snap.visibility.visible,
            scaling=scaling,
            affected_ccs=snap.visibility.affected_ccs,
        )
        model["generation"] = snap.generation
        model["primary_protein"] = self.selection.primary_protein
        model["primary_ppe"] = (
            list(self.selection.primary_ppe) if self.selection.primary_ppe else None
        )
        return model

    def properties_payload(self) -> dict:
        ensemble = self._require_ensemble()
        snap = self.snapshot()
        names = list(ensemble.property_names)
        if snap.extra_properties:
            names.append(SIMILARITY_PROPERTY)
        affected = snap.visibility.affected_by_disabled
        rows = []
        for cc_id in ensemble.sorted_cc_ids(ensemble.all_cc_ids):
            cc = ensemble.configuration(cc_id)
            values = dict(cc.properties)
            values.update(snap.extra_properties.get(cc_id, {}))
            if cc_id not in snap.visibility.visible:
                state = "hidden"
            elif cc_id in affected:
                state = "affected"
            else:
                state = "visible"
            rows.append(
                {
                    "cc": cc_id,
                    "state": state,
                    "affected_by": sorted(affected.get(cc_id, ())),
                    "properties": values,
                    "selected": cc_id in self._selection_view().cc_ids,
                }
            )
        return {
            "generation": snap.generation,
            "property_names": names,
            "configurations": rows,
        }

    def _selection_view(self) -> flt.Selection:
        return self.expanded if self.expanded is not None else self.selection

    def protein_view_payload(self, primary: str | None = None, condensed: bool = False) -> dict:
        ensemble = self._require_ensemble()
        snap = self.snapshot()
        primary = primary or self.selection.primary_protein
        if primary is None:
            raise InputError("no primary protein designated")
        model = protein_view_model(
            ensemble, primary, snap.visibility.visible, condensed=condensed
        )
        marks = flt.cell_marks(model.cell_support, snap.visibility.affected_ccs)
        payload = model.payload(marks)
        payload["generation"] = snap.generation
        return payload

    def residue_matrix_payload(
        self, pair: tuple[str, str] | None = None, sort: str = "sequence"
    ) -> dict:
        ensemble = self._require_ensemble()
        snap = self.snapshot()
        pair = pair or self.selection.primary_ppe
        if pair is None:
            raise InputError("no primary protein pair designated")
        model = residue_matrix_model(
            ensemble, pair, snap.visibility.visible, sort=sort
        )
        marks = flt.cell_marks(model.cell_support, snap.visibility.affected_ccs)
        payload = model.payload(marks)
        payload["generation"] = snap.generation
        return payload

    def contact_lists_payload(
        self, ccs: list[str], pair: tuple[str, str] | None = None
    ) -> dict:
        ensemble = self._require_ensemble()
        snap = self.snapshot()
        pair = pair_key(*pair) if pair else self.selection.primary_ppe
        if pair is None:
            raise InputError("no primary protein pair designated")
        reference_keys, label = self._reference_ppc_keys(pair)
        payload = contact_zone_model(ensemble, pair, reference_keys, ccs, label)
        payload["generation"] = snap.generation
        return payload

    def _reference_ppc_keys(self, pair) -> tuple[frozenset[AAPKey], str]:
        ensemble = self._require_ensemble()
        if self.selection.primary_ppc is not None:
            ppc_pair, cc_id = self.selection.primary_ppc
            if ppc_pair == pair:
                ppe = ensemble.ppe(*pair)
                return ppe.ppcs[cc_id].aap_keys, f"cc {cc_id}"
        if self.reference is not None and pair in self.reference.ppc_keys:
            return self.reference.ppc_keys[pair], "external reference"
        if self.selection.primary_cc is not None:
            cc = ensemble.configuration(self.selection.primary_cc)
            ppc = cc.ppcs.get(pair)
            if ppc is not None:
                return ppc.aap_keys, f"cc {self.selection.primary_cc}"
        raise InputError(
            "no reference interface for this pair: designate a primary PPC/CC "
            "or load a reference structure"
        )

    def aggregates_payload(self) -> dict:
        """Per-pair interface aggregates over the visible set."""
        ensemble = self._require_ensemble()
        snap = self.snapshot()
        rows = []
        for pair in sorted(ensemble.ppes):
            agg = ppe_aggregate(ensemble.ppes[pair], snap.visibility.visible)
            rows.append(
                {
                    "pair": list(pair),
                    "n_ppcs": agg.n_ppcs,
                    "n_unique_aap": agg.n_unique_aap,
                    "consistency": agg.consistency,
                }
            )
        return {"generation": snap.generation, "pairs": rows}

    def similarity_payload(self) -> dict:
        snap = self.snapshot()
        scores = {
            cc_id: values[SIMILARITY_PROPERTY]
            for cc_id, values in snap.extra_properties.items()
        }
        order = sorted(scores, key=lambda cc_id: (-scores[cc_id], cc_id))
        return {
            "generation": snap.generation,
            "scores": [{"cc": cc_id, "similarity": scores[cc_id]} for cc_id in order],
        }

    def _density_fields(
        self, primary: str | None, spacing: float, bandwidth_scale: float
    ) -> dict:
        ensemble = self._require_ensemble()
        snap = self.snapshot()
        primary = primary or self.selection.primary_protein
        if primary is None:
            raise InputError("no primary protein designated")
        key = (snap.generation, primary, spacing, bandwidth_scale)
        fields = self._density_cache.get(key)
        if fields is None:
            fields = compute_density(
                ensemble,
                primary,
                snap.visibility.visible,
                spacing=spacing,
                bandwidth_scale=bandwidth_scale,
                reference_cc=self.selection.primary_cc,
            )
            # keep only the latest grid: stale generations are useless
            self._density_cache = {key: fields}
        return fields

    def density_payload(
        self,
        primary: str | None = None,
        iso_fraction: float = DEFAULT_ISO_FRACTION,
        spacing: float = DEFAULT_SPACING,
        bandwidth_scale: float = 1.0,
    ) -> dict:
        ensemble = self._require_ensemble()
        snap = self.snapshot()
        if iso_fraction <= 0:
            raise InputError("iso level must be positive")
        fields = self._density_fields(primary, spacing, bandwidth_scale)
        channels = []
        for name, density_field in fields.items():
            peak = float(density_field.values.max()) if density_field.values.size else 0.0
            mesh = extract_isosurface(density_field, iso_fraction * peak) if peak > 0 else None
            channels.append(
                {
                    "protein": name,
                    "color_index": ensemble.protein(name).color_index,
                    "peak": peak,
                    "iso": iso_fraction * peak,
                    "dims": list(density_field.dims),
                    "vertex_count": 0 if mesh is None else int(len(mesh.vertices)),
                    "triangle_count": 0 if mesh is None else int(len(mesh.triangles)),
                }
            )
        return {
            "generation": snap.generation,
            "primary": primary or self.selection.primary_protein,
            "iso_fraction": iso_fraction,
            "spacing": spacing,
            "channels": channels,
        }

    def density_mesh(
        self,
        protein: str,
        iso_fraction: float = DEFAULT_ISO_FRACTION,
        spacing: float = DEFAULT_SPACING,
        primary: str | None = None,
    ):
        """The extracted isosurface mesh for one partner channel."""
        if iso_fraction <= 0:
            raise InputError("iso level must be positive")
        fields = self._density_fields(primary, spacing, 1.0)
        if protein not in fields:
            raise UnknownEntityError(f"no density channel for protein {protein!r}")
        density_field = fields[protein]
        peak = float(density_field.values.max()) if density_field.values.size else 0.0
        level = iso_fraction * peak if peak > 0 else iso_fraction
        return extract_isosurface(density_field, level)

    def density_field(
        self,
        protein: str,
        spacing: float = DEFAULT_SPACING,
        primary: str | None = None,
    ):
        fields = self._density_fields(primary, spacing, 1.0)
        if protein not in fields:
            raise UnknownEntityError(f"no density channel for protein {protein!r}")
        return fields[protein]

    def exploded_payload(self, cc_id: str, gap: float = 10.0, max_iters: int = 500) -> dict:
        ensemble = self._require_ensemble()
        snap = self.snapshot()
        cc = ensemble.configuration(cc_id)
        layout = exploded_layout(cc.coords, gap=gap, max_iters=max_iters)
        proteins = []
        for name in sorted(cc.coords):
            template = ensemble.protein(name)
            offset = layout.transforms[name].translation
            interacting = sorted(
                {
                    aa[1]
                    for pair, ppc in cc.ppcs.items()
                    if name in pair
                    for k in ppc.aap_keys
                    for aa in k
                    if aa[0] == name
                }
            )
            proteins.append(
                {
                    "protein": name,
                    "color_index": template.color_index,
                    "offset": [float(v) for v in offset],
                    "interacting_seqs": interacting,
                }
            )
        return {
            "generation": snap.generation,
            "cc": cc_id,
            "gap": gap,
            "converged": layout.converged,
            "iterations": layout.iterations,
            "proteins": proteins,
        }

    def cc_coordinates_payload(self, cc_id: str) -> dict:
        """Compact per-residue geometry of one configuration for the 3D
        views: residue centroids plus which residues interact in this
        configuration (and with whom)."""
        ensemble = self._require_ensemble()
        snap = self.snapshot()
        cc = ensemble.configuration(cc_id)
        interacting: dict[str, dict[int, set[str]]] = {}
        for pair, ppc in cc.ppcs.items():
            for key in ppc.aap_keys:
                for aa, other in ((key[0], key[1]), (key[1], key[0])):
                    interacting.setdefault(aa[0], {}).setdefault(aa[1], set()).add(other[0])
        proteins = []
        for name in sorted(cc.coords):
            template = ensemble.protein(name)
            xyz = cc.coords[name]
            residues = []
            for idx in range(template.n_residues):
                atom_idx = np.nonzero(template.atom_residue_index == idx)[0]
                centroid = xyz[atom_idx].mean(axis=0)
                seq = template.residue_seqs[idx]
                partners = sorted(interacting.get(name, {}).get(seq, ()))
                residues.append(
                    {
                        "seq": seq,
                        "name": template.residue_names[idx],
                        "position": [round(float(v), 3) for v in centroid],
                        "partners": partners,
                    }
                )
            proteins.append(
                {
                    "protein": name,
                    "color_index": template.color_index,
                    "residues": residues,
                }
            )
        return {"generation": snap.generation, "cc": cc_id, "proteins": proteins}

    def filters_payload(self) -> dict:
        ensemble = self._require_ensemble()
        snap = self.snapshot()
        records = []
        for record in sorted(self.queue.records, key=lambda r: r.created_order):
            subject_ccs = flt.resolve_subject(
                record.subject, ensemble, snap.extra_properties
            )
            records.append(
                {
                    "id": record.id,
                    "kind": record.kind,
                    "label": record.label,
                    "enabled": record.enabled,
                    "eval_order": record.eval_order,
                    "subject": _subject_json(record.subject),
                    "subject_cc_count": len(subject_ccs),
                    "delta": snap.visibility.per_filter_delta.get(record.id),
                }
            )
        total_ppcs = sum(len(ppe.ppcs) for ppe in ensemble.ppes.values())
        visible_ppcs = sum(
            len(set(ppe.ppcs) & snap.visibility.visible)
            for ppe in ensemble.ppes.values()
        )
        return {
            "generation": snap.generation,
            "filters": records,
            "status": {
                "cc_total": len(ensemble.all_cc_ids),
                "cc_visible": len(snap.visibility.visible),
                "cc_hidden": len(snap.visibility.hidden),
                "ppc_total": total_ppcs,
                "ppc_visible": visible_ppcs,
                "ppc_hidden": total_ppcs - visible_ppcs,
                "affected_by_disabled": len(snap.visibility.affected_by_disabled),
            },
        }

    def selection_payload(self) -> dict:
        snap = self.snapshot()
        view = self._selection_view()
        return {
            "generation": snap.generation,
            "cc_ids": sorted(view.cc_ids),
            "ppe_pairs": [list(p) for p in sorted(view.ppe_pairs)],
            "ppc_ids": [[list(pair), cc] for pair, cc in sorted(view.ppc_ids)],
            "aap_keys": [
                [[a[0], a[1]], [b[0], b[1]]] for a, b in sorted(view.aap_keys)
            ],
            "aa_ids": [[p, s] for p, s in sorted(view.aa_ids)],
        }
