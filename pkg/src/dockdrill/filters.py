"""Ordered filter queue with disable diffing and cross-level propagation.

Four filter operations plus range filters narrow the set of visible
configurations:

* remove          hides all configurations matched by the subject
* remove_complement  hides everything the subject does NOT match
* add             re-adds previously hidden configurations
* fix             pins configurations: they survive every other filter
* range           keeps configurations whose property lies in [lo, hi]
                  (a special remove_complement; its queue position moves to
                  the end whenever the range changes)

Filters are evaluated in the order they were added; fix subjects are
united back in after the ordered pass, which makes fix order-independent
and dominant. Subjects at any hierarchy level resolve to configuration-id
sets first (up-propagation), so one engine evaluates them all.

Disabling a filter keeps its queue slot. The visibility state then reports,
per reappearing configuration, which disabled filters would hide it again;
this feeds the grey/cross/diagonal indicators of the views.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

from .errors import InputError, UnknownEntityError
from .hierarchy import AAId, AAPKey, ComplexEnsemble, PairKey, pair_key

__all__ = [
    "KINDS",
    "LEVELS",
    "SubjectSpec",
    "FilterRecord",
    "FilterQueue",
    "VisibilityState",
    "Selection",
    "resolve_subject",
    "evaluate",
    "cell_marks",
    "propagate_selection",
]

KINDS = ("remove", "remove_complement", "fix", "add", "range")
LEVELS = ("cc", "ppe", "ppc", "aap", "aa")

MARK_NORMAL = "normal"
MARK_PARTIAL = "partially_affected"
MARK_FULL = "fully_affected"


@dataclass(frozen=True)
class SubjectSpec:
    """What a filter applies to: an explicit id set at one hierarchy level,
    or a property-range predicate.

    Explicit ids per level: cc -> configuration ids, ppe -> protein pairs,
    ppc -> (pair, cc id) tuples, aap -> pair keys, aa -> (protein, seq) ids.
    Range predicates carry `prop`/`lo`/`hi`; at aa/aap level an optional
    `scope` (protein name or protein pair) restricts which interactions are
    inspected.
    """

    level: str
    cc_ids: frozenset[str] = frozenset()
    pairs: frozenset[PairKey] = frozenset()
    ppc_ids: frozenset[tuple[PairKey, str]] = frozenset()
    aap_keys: frozenset[AAPKey] = frozenset()
    aa_ids: frozenset[AAId] = frozenset()
    prop: str | None = None
    lo: float = -math.inf
    hi: float = math.inf
    scope: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.level not in LEVELS:
            raise InputError(f"unknown subject level {self.level!r}")
        if self.prop is not None and self.lo > self.hi:
            raise InputError(f"range bounds inverted: [{self.lo}, {self.hi}]")

    @classmethod
    def ccs(cls, ids: Iterable[str]) -> "SubjectSpec":
        return cls(level="cc", cc_ids=frozenset(ids))

    @classmethod
    def pair_contact(cls, p: str, q: str) -> "SubjectSpec":
        return cls(level="ppe", pairs=frozenset({pair_key(p, q)}))

    @classmethod
    def ppcs(cls, ids: Iterable[tuple[PairKey, str]]) -> "SubjectSpec":
        return cls(level="ppc", ppc_ids=frozenset(ids))

    @classmethod
    def aaps(cls, keys: Iterable[AAPKey]) -> "SubjectSpec":
        return cls(level="aap", aap_keys=frozenset(keys))

    @classmethod
    def aas(cls, ids: Iterable[AAId]) -> "SubjectSpec":
        return cls(level="aa", aa_ids=frozenset(ids))

    @classmethod
    def property_range(
        cls, prop: str, lo: float, hi: float, level: str = "cc",
        scope: tuple[str, ...] | None = None,
    ) -> "SubjectSpec":
        return cls(level=level, prop=prop, lo=lo, hi=hi, scope=scope)

    def describe(self) -> str:
        if self.prop is not None:
            where = f"{self.level} {self.prop}" if self.level != "cc" else self.prop
            return f"{where} in [{self.lo:g}, {self.hi:g}]"
        if self.level == "cc":
            return f"{len(self.cc_ids)} CCs"
        if self.level == "ppe":
            return "contact " + ", ".join("-".join(p) for p in sorted(self.pairs))
        if self.level == "ppc":
            return f"{len(self.ppc_ids)} PPCs"
        if self.level == "aap":
            names = ", ".join(
                f"{a[0]}:{a[1]}-{b[0]}:{b[1]}" for a, b in sorted(self.aap_keys)
            )
            return f"AAP {names}" if len(self.aap_keys) <= 3 else f"{len(self.aap_keys)} AAPs"
        names = ", ".join(f"{p}:{s}" for p, s in sorted(self.aa_ids))
        return f"AA {names}" if len(self.aa_ids) <= 4 else f"{len(self.aa_ids)} AAs"


def _range_match(value: float | None, lo: float, hi: float) -> bool:
    # absent property values fall outside every range
    return value is not None and lo <= value <= hi


def resolve_subject(
    spec: SubjectSpec,
    ensemble: ComplexEnsemble,
    extra_properties: Mapping[str, Mapping[str, float]] | None = None,
) -> frozenset[str]:
    """Propagate a subject up to the configuration level.

    aap -> configurations containing the pair; aa -> configurations where
    the amino acid interacts; ppe/pair -> configurations where the pair
    contacts; ppc -> its configuration; cc -> itself. Property ranges:
    cc level selects on configuration properties (including externally
    supplied columns such as the similarity score); aa/aap level selects
    configurations containing at least one in-range interacting item.
    Unknown explicit ids raise, listing them.
    """
    if spec.prop is not None:
        return _resolve_range(spec, ensemble, extra_properties or {})

    if spec.level == "cc":
        unknown = spec.cc_ids - ensemble.all_cc_ids
        if unknown:
            raise UnknownEntityError(f"unknown configuration ids: {sorted(unknown)}")
        return spec.cc_ids
    if spec.level == "ppe":
        out: set[str] = set()
        for pair in spec.pairs:
            for name in pair:
                ensemble.protein(name)
            out |= ensemble.pair_ccs.get(pair, frozenset())
        return frozenset(out)
    if spec.level == "ppc":
        out = set()
        for pair, cc_id in spec.ppc_ids:
            ppe = ensemble.ppes.get(pair)
            if ppe is None or cc_id not in ppe.ppcs:
                raise UnknownEntityError(f"unknown PPC {pair} in configuration {cc_id!r}")
            out.add(cc_id)
        return frozenset(out)
    if spec.level == "aap":
        unknown_keys = [k for k in spec.aap_keys if k not in ensemble.aap_ccs]
        if unknown_keys:
            raise UnknownEntityError(f"unknown amino-acid pairs: {sorted(unknown_keys)}")
        out = set()
        for key in spec.aap_keys:
            out |= ensemble.aap_ccs[key]
        return frozenset(out)
    # aa level
    out = set()
    for aa_id in spec.aa_ids:
        ensemble.amino_acid(aa_id)  # raises on unknown residue
        out |= ensemble.aa_ccs.get(aa_id, frozenset())
    return frozenset(out)


def _resolve_range(
    spec: SubjectSpec,
    ensemble: ComplexEnsemble,
    extra: Mapping[str, Mapping[str, float]],
) -> frozenset[str]:
    lo, hi = spec.lo, spec.hi
    if spec.level == "cc":
        out = set()
        for cc_id, cc in ensemble.configurations.items():
            value = cc.properties.get(spec.prop)
            if value is None:
                value = extra.get(cc_id, {}).get(spec.prop)
            if _range_match(value, lo, hi):
                out.add(cc_id)
        return frozenset(out)

    if spec.level == "aa":
        scope_protein = spec.scope[0] if spec.scope else None
        out = set()
        for aa_id, ccs in ensemble.aa_ccs.items():
            if scope_protein is not None and aa_id[0] != scope_protein:
                continue
            aa = ensemble.amino_acid(aa_id)
            if spec.prop == "hydrophobicity":
                value = aa.hydrophobicity
            elif spec.prop == "frequency":
                value = len(ccs)
            else:
                raise InputError(f"unknown aa property {spec.prop!r}")
            if _range_match(value, lo, hi):
                out |= ccs
        return frozenset(out)

    if spec.level == "aap":
        scope_pair = pair_key(*spec.scope) if spec.scope else None
        out = set()
        if spec.prop == "frequency":
            for key, ccs in ensemble.aap_ccs.items():
                if scope_pair is not None and (key[0][0], key[1][0]) != scope_pair:
                    continue
                if _range_match(len(ccs), lo, hi):
                    out |= ccs
        elif spec.prop == "min_distance":
            for pair, ppe in ensemble.ppes.items():
                if scope_pair is not None and pair != scope_pair:
                    continue
                for cc_id, ppc in ppe.ppcs.items():
                    if any(_range_match(d, lo, hi) for d in ppc.min_distances.values()):
                        out.add(cc_id)
        else:
            raise InputError(f"unknown aap property {spec.prop!r}")
        return frozenset(out)

    raise InputError(f"range filters are not defined at level {spec.level!r}")


@dataclass
class FilterRecord:
    id: int
    kind: str
    subject: SubjectSpec
    enabled: bool
    created_order: int
    eval_order: int
    label: str


@dataclass
class VisibilityState:
    """Partition of the configuration ids produced by one queue evaluation.

    `affected_by_disabled` maps each currently visible configuration that
    would disappear if some disabled filter were re-enabled to the ids of
    all such filters. `per_filter_delta` reports how many configurations
    each enabled filter removed (negative values: an add filter re-added)."""

    visible: frozenset[str]
    hidden: frozenset[str]
    affected_by_disabled: dict[str, frozenset[int]]
    per_filter_delta: dict[int, int] = field(default_factory=dict)

    @property
    def affected_ccs(self) -> frozenset[str]:
        return frozenset(self.affected_by_disabled)


class FilterQueue:
    """Ordered filter records over a fixed configuration universe.

    Single-writer: mutations go through the methods below; evaluation is a
    pure function (see `evaluate`). Range filters move to the end of the
    evaluation order whenever their range changes; disabled filters keep
    their slot so re-enabling restores the exact prior semantics.
    """

    def __init__(self, all_ccs: Iterable[str]):
        self.all_ccs: frozenset[str] = frozenset(all_ccs)
        self.records: list[FilterRecord] = []
        self._next_id = 1
        self._next_order = 1

    def _take_order(self) -> int:
        order = self._next_order
        self._next_order += 1
        return order

    def add_filter(self, kind: str, subject: SubjectSpec, label: str | None = None) -> FilterRecord:
        if kind not in KINDS:
            raise InputError(f"unknown filter kind {kind!r}")
        if kind == "range" and subject.prop is None:
            raise InputError("range filters need a property-range subject")
        order = self._take_order()
        record = FilterRecord(
            id=self._next_id,
            kind=kind,
            subject=subject,
            enabled=True,
            created_order=order,
            eval_order=order,
            label=label or f"{kind}: {subject.describe()}",
        )
        self._next_id += 1
        self.records.append(record)
        return record

    def get(self, filter_id: int) -> FilterRecord:
        for record in self.records:
            if record.id == filter_id:
                return record
        raise UnknownEntityError(f"unknown filter id {filter_id}")

    def set_range(self, filter_id: int, lo: float, hi: float) -> FilterRecord:
        record = self.get(filter_id)
        if record.kind != "range":
            raise InputError(f"filter {filter_id} is a {record.kind} filter, not a range")
        if lo > hi:
            raise InputError(f"range bounds inverted: [{lo}, {hi}]")
        record.subject = replace(record.subject, lo=lo, hi=hi)
        record.eval_order = self._take_order()  # moves to the end of the queue
        record.label = f"range: {record.subject.describe()}"
        return record

    def set_enabled(self, filter_id: int, enabled: bool) -> FilterRecord:
        record = self.get(filter_id)
        record.enabled = enabled
        return record

    def remove_filter(self, filter_id: int) -> None:
        record = self.get(filter_id)
        self.records.remove(record)

    def clear(self) -> None:
        self.records.clear()

    def in_eval_order(self) -> list[FilterRecord]:
        return sorted(self.records, key=lambda r: r.eval_order)


def _run_pass(
    records: list[FilterRecord],
    resolved: dict[int, frozenset[str]],
    all_ccs: frozenset[str],
    active_ids: frozenset[int],
    deltas: dict[int, int] | None = None,
) -> frozenset[str]:
    visible = set(all_ccs)
    fixed: set[str] = set()
    for record in records:
        if record.id not in active_ids:
            continue
        subject = resolved[record.id]
        before = len(visible)
        if record.kind == "remove":
            visible -= subject
        elif record.kind in ("remove_complement", "range"):
            visible &= subject
        elif record.kind == "add":
            visible |= subject & all_ccs
        elif record.kind == "fix":
            fixed |= subject & all_ccs
        if deltas is not None and record.kind != "fix":
            deltas[record.id] = before - len(visible)
    # fix overrides everything: united back in after the ordered pass
    visible |= fixed
    return frozenset(visible)


def evaluate(
    queue: FilterQueue,
    ensemble: ComplexEnsemble,
    extra_properties: Mapping[str, Mapping[str, float]] | None = None,
) -> VisibilityState:
    """Evaluate the queue to a visibility partition.

    Subjects re-resolve against the (immutable) ensemble on every call, so
    dynamic property columns like the similarity score stay current. For
    every disabled filter the queue is additionally evaluated with just that
    filter re-enabled; ids visible now but hidden in that run are attributed
    to it."""
    records = queue.in_eval_order()
    resolved = {
        r.id: resolve_subject(r.subject, ensemble, extra_properties) for r in records
    }
    enabled_ids = frozenset(r.id for r in records if r.enabled)
    deltas: dict[int, int] = {}
    visible = _run_pass(records, resolved, queue.all_ccs, enabled_ids, deltas)

    affected: dict[str, set[int]] = {}
    for record in records:
        if record.enabled:
            continue
        with_d = _run_pass(
            records, resolved, queue.all_ccs, enabled_ids | {record.id}
        )
        for cc_id in visible - with_d:
            affected.setdefault(cc_id, set()).add(record.id)

    return VisibilityState(
        visible=visible,
        hidden=queue.all_ccs - visible,
        affected_by_disabled={k: frozenset(v) for k, v in affected.items()},
        per_filter_delta=deltas,
    )


def cell_marks(
    cell_support: Mapping[tuple, frozenset[str] | set[str]],
    affected_ccs: frozenset[str] | set[str],
) -> dict[tuple, str]:
    """Classify aggregated view cells against disabled-filter reappearances.

    A cell whose supporting configurations are all affected disappears when
    the filter is re-enabled (full cross); partially supported cells get a
    single diagonal; untouched cells are normal."""
    marks: dict[tuple, str] = {}
    for cell, support in cell_support.items():
        if not support:
            marks[cell] = MARK_NORMAL
            continue
        hit = len(set(support) & set(affected_ccs))
        if hit == 0:
            marks[cell] = MARK_NORMAL
        elif hit == len(support):
            marks[cell] = MARK_FULL
        else:
            marks[cell] = MARK_PARTIAL
    return marks


@dataclass
class Selection:
    """Current focus: explicit per-level id sets plus the primary entities.

    `propagate_selection` returns an expanded copy whose per-level sets are
    derived from the explicit selection it was computed from (kept in
    `origin`), which makes repeated propagation idempotent."""

    cc_ids: frozenset[str] = frozenset()
    ppe_pairs: frozenset[PairKey] = frozenset()
    ppc_ids: frozenset[tuple[PairKey, str]] = frozenset()
    aap_keys: frozenset[AAPKey] = frozenset()
    aa_ids: frozenset[AAId] = frozenset()
    primary_protein: str | None = None
    primary_ppe: PairKey | None = None
    primary_cc: str | None = None
    primary_ppc: tuple[PairKey, str] | None = None
    origin: "Selection | None" = None

    def explicit(self) -> "Selection":
        return self.origin if self.origin is not None else self


def propagate_selection(
    selection: Selection, ensemble: ComplexEnsemble, down: bool = False
) -> Selection:
    """Expand a selection across hierarchy levels, on demand.

    Up-propagation maps every selected lower-level item to the
    configurations containing it. Down-propagation (only when requested)
    expands that configuration set to all its PPCs, AAPs, and AAs; without
    it the other levels keep only their explicit content."""
    base = selection.explicit()
    cc_ids = set(base.cc_ids)
    for pair in base.ppe_pairs:
        cc_ids |= ensemble.pair_ccs.get(pair, frozenset())
    for _, cc_id in base.ppc_ids:
        cc_ids.add(cc_id)
    for key in base.aap_keys:
        cc_ids |= ensemble.aap_ccs.get(key, frozenset())
    for aa_id in base.aa_ids:
        cc_ids |= ensemble.aa_ccs.get(aa_id, frozenset())

    ppc_ids = set(base.ppc_ids)
    aap_keys = set(base.aap_keys)
    aa_ids = set(base.aa_ids)
    if down:
        for cc_id in cc_ids:
            cc = ensemble.configurations.get(cc_id)
            if cc is None:
                continue
            for pair, ppc in cc.ppcs.items():
                ppc_ids.add((pair, cc_id))
                aap_keys |= ppc.aap_keys
        for key in aap_keys:
            aa_ids.add(key[0])
            aa_ids.add(key[1])

    return Selection(
        cc_ids=frozenset(cc_ids),
        ppe_pairs=base.ppe_pairs,
        ppc_ids=frozenset(ppc_ids),
        aap_keys=frozenset(aap_keys),
        aa_ids=frozenset(aa_ids),
        primary_protein=selection.primary_protein,
        primary_ppe=selection.primary_ppe,
        primary_cc=selection.primary_cc,
        primary_ppc=selection.primary_ppc,
        origin=base,
    )
