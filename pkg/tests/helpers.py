"""Shared builders for tests: tiny ensembles and randomized filter queues."""

from __future__ import annotations

import numpy as np

from dockdrill.filters import FilterQueue, SubjectSpec
from dockdrill.hierarchy import ComplexEnsemble, build_hierarchy
from dockdrill.synthetic import planted_ensemble


def cc_only_ensemble(cc_ids, properties=None) -> ComplexEnsemble:
    """An ensemble whose configurations have ids and properties but no
    contacts: enough to exercise cc-level filtering."""
    raw = planted_ensemble(
        {"A": [1], "B": [1]},
        {cc_id: [] for cc_id in cc_ids},
        properties=properties,
    )
    return build_hierarchy(raw)


def random_queue_trial(rng: np.random.Generator, max_ccs=50, max_filters=10):
    """One randomized trial: an engine queue plus the mirrored record list
    for the independent interpreter.

    Filters mix all five kinds. Explicit subjects are random cc-id subsets;
    range filters select on a random property column, and the mirror
    resolves them independently from the raw value dict. Some range filters
    get their bounds changed afterwards, moving them to the queue end.
    Roughly a third of the filters end up disabled.
    """
    n_ccs = int(rng.integers(1, max_ccs + 1))
    cc_ids = [f"{i:02d}" for i in range(n_ccs)]
    values = {cc_id: float(rng.uniform(0, 100)) for cc_id in cc_ids}
    ensemble = cc_only_ensemble(cc_ids, {cc_id: {"x": v} for cc_id, v in values.items()})

    queue = FilterQueue(ensemble.all_cc_ids)
    kinds = ["remove", "remove_complement", "fix", "add", "range"]
    n_filters = int(rng.integers(1, max_filters + 1))
    range_ids = []
    for _ in range(n_filters):
        kind = kinds[int(rng.integers(len(kinds)))]
        if kind == "range":
            lo, hi = sorted(rng.uniform(-10, 110, size=2))
            record = queue.add_filter(
                "range", SubjectSpec.property_range("x", float(lo), float(hi))
            )
            range_ids.append(record.id)
        else:
            size = int(rng.integers(0, n_ccs + 1))
            subset = rng.choice(cc_ids, size=size, replace=False)
            queue.add_filter(kind, SubjectSpec.ccs(subset))

    for filter_id in range_ids:
        if rng.random() < 0.5:
            lo, hi = sorted(rng.uniform(-10, 110, size=2))
            queue.set_range(filter_id, float(lo), float(hi))

    for record in queue.records:
        if rng.random() < 0.3:
            record.enabled = False

    mirror = []
    for record in queue.records:
        if record.kind == "range":
            ccs = {
                cc_id
                for cc_id, v in values.items()
                if record.subject.lo <= v <= record.subject.hi
            }
        else:
            ccs = set(record.subject.cc_ids)
        mirror.append(
            {
                "kind": record.kind,
                "ccs": ccs,
                "enabled": record.enabled,
                "eval_order": record.eval_order,
                "id": record.id,
            }
        )
    return ensemble, queue, mirror
