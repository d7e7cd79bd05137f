"""Acceptance suite: one test per release criterion, each printing a
pass/fail line (see conftest). Tolerances are fixed here, not calibrated.

Run with `pytest tests/test_acceptance.py -v` (or `-s` to watch the lines).
"""

import time
from itertools import combinations

import numpy as np
from fastapi.testclient import TestClient
from scipy.spatial.distance import cdist

from dockdrill.aggregates import ppe_aggregate, protein_view_model
from dockdrill.cli import EXIT_OK, main
from dockdrill.filters import (
    FilterQueue,
    SubjectSpec,
    cell_marks,
    evaluate,
)
from dockdrill.hierarchy import (
    ProteinPairConfiguration,
    ProteinPairEnsemble,
    build_hierarchy,
    detect_contacts,
)
from dockdrill.server import create_app
from dockdrill.spatial import (
    _field_from_atoms,
    density_at_points,
    exploded_layout,
    extract_isosurface,
    kabsch_superpose,
    rmsd,
)
from dockdrill.synthetic import (
    blob_coords,
    case_shaped_ensemble,
    planted_ensemble,
    random_ensemble,
    random_rotation,
    write_ensemble_files,
)

from helpers import random_queue_trial
from oracles import (
    brute_force_contacts,
    consistency_brute,
    interpret_queue,
    mesh_component_count,
    mesh_edge_degrees,
    naive_density,
)

# -- 1. consistency oracle ------------------------------------------------------


def test_consistency_oracle_1000_random_ppes():
    """1000 random PPEs (<=8 PPCs, <=12 unique AAPs): aggregate equals the
    brute-force formula within 1e-12; consistency == 1 exactly iff all AAP
    sets are equal. Runtime < 5 s."""
    rng = np.random.default_rng(101)
    universe = [(("A", i), ("B", i)) for i in range(1, 13)]
    start = time.perf_counter()
    for trial in range(1000):
        n_ppcs = int(rng.integers(1, 9))
        sets = []
        ppcs = {}
        for i in range(n_ppcs):
            k = int(rng.integers(1, 13))
            chosen = frozenset(
                universe[j] for j in rng.choice(12, size=k, replace=False)
            )
            sets.append(set(chosen))
            cc_id = str(i)
            ppcs[cc_id] = ProteinPairConfiguration(
                cc_id=cc_id,
                pair=("A", "B"),
                aap_keys=chosen,
                min_distances={key: 3.0 for key in chosen},
            )
        ppe = ProteinPairEnsemble(("A", "B"), ppcs)
        agg = ppe_aggregate(ppe, frozenset(ppcs))
        expected, n_unique, presence = consistency_brute(sets)
        assert agg.n_unique_aap == n_unique
        assert abs(agg.consistency - expected) <= 1e-12
        for key, value in presence.items():
            assert abs(agg.per_aap_presence[key] - value) <= 1e-12
        assert (agg.consistency == 1.0) == all(s == sets[0] for s in sets)
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0, f"consistency oracle took {elapsed:.2f}s"


# -- 2. contact oracle ------------------------------------------------------------


def test_contact_oracle_200_random_ccs():
    """200 random configurations (<=5 proteins, <=30 residues each):
    detect_contacts equals the all-pairs brute force exactly at cutoffs
    4.0/5.0/6.0 A. Runtime < 30 s."""
    rng = np.random.default_rng(202)
    start = time.perf_counter()
    checked = 0
    while checked < 200:
        m = int(rng.integers(2, 6))
        residues = int(rng.integers(5, 31))
        raw = random_ensemble(
            n_proteins=m,
            n_ccs=4,
            n_residues=residues,
            atoms_per_residue=int(rng.integers(1, 4)),
            seed=int(rng.integers(2**31)),
            crowding=float(rng.uniform(1.0, 3.0)),
        )
        for cc in raw.configurations:
            for cutoff in (4.0, 5.0, 6.0):
                engine = {
                    ppc.pair: ppc.min_distances
                    for ppc in detect_contacts(raw.proteins, cc, cutoff)
                }
                oracle = brute_force_contacts(raw.proteins, cc, cutoff)
                assert set(engine) == set(oracle)
                for pair, contacts in oracle.items():
                    assert set(engine[pair]) == set(contacts)
                    for key, dmin in contacts.items():
                        assert engine[pair][key] == dmin  # bit-identical
            checked += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0, f"contact oracle took {elapsed:.2f}s"


# -- 3. filter-queue oracle ---------------------------------------------------------


def test_filter_queue_oracle_1000_random_queues():
    """1000 random queues (<=10 filters of all five kinds, <=50 CCs):
    evaluate equals the independent set-algebra interpreter exactly; fix
    dominance, add/remove monotonicity, disable/enable involution hold on
    every trial. Runtime < 10 s."""
    rng = np.random.default_rng(303)
    start = time.perf_counter()
    for trial in range(1000):
        ensemble, queue, mirror = random_queue_trial(rng)
        state = evaluate(queue, ensemble)
        assert state.visible == interpret_queue(mirror, ensemble.all_cc_ids)

        for record in queue.records:
            if record.kind == "fix" and record.enabled:
                assert record.subject.cc_ids <= state.visible

        ids = sorted(ensemble.all_cc_ids)
        subset = [ids[i] for i in rng.choice(len(ids), size=min(3, len(ids)), replace=False)]
        queue.add_filter("remove", SubjectSpec.ccs(subset))
        after_remove = evaluate(queue, ensemble).visible
        assert after_remove <= state.visible
        queue.add_filter("add", SubjectSpec.ccs(subset))
        assert evaluate(queue, ensemble).visible >= after_remove

        victim = queue.records[int(rng.integers(len(queue.records)))]
        original = victim.enabled
        baseline = evaluate(queue, ensemble)
        queue.set_enabled(victim.id, not original)
        queue.set_enabled(victim.id, original)
        again = evaluate(queue, ensemble)
        assert again.visible == baseline.visible
        assert again.affected_by_disabled == baseline.affected_by_disabled
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0, f"filter-queue oracle took {elapsed:.2f}s"


# -- 4. disabled-filter attribution ---------------------------------------------------


def test_disabled_filter_attribution():
    """Per disabled filter, affected ids equal the re-evaluation difference;
    a cell supported by 20 CCs with 5 affected is partially affected."""
    rng = np.random.default_rng(404)
    for trial in range(200):
        ensemble, queue, mirror = random_queue_trial(rng)
        enabled_records = [r for r in queue.records if r.enabled]
        if enabled_records:
            victim = enabled_records[int(rng.integers(len(enabled_records)))]
            queue.set_enabled(victim.id, False)
            mirror = [
                {**m, "enabled": False} if m["id"] == victim.id else m for m in mirror
            ]
        state = evaluate(queue, ensemble)
        for record in queue.records:
            if record.enabled:
                continue
            flipped = [
                {**m, "enabled": True} if m["id"] == record.id else m for m in mirror
            ]
            with_it = interpret_queue(flipped, ensemble.all_cc_ids)
            expected = state.visible - with_it
            actual = {
                cc for cc, fids in state.affected_by_disabled.items() if record.id in fids
            }
            assert actual == expected
        # affected ids are always currently visible
        assert set(state.affected_by_disabled) <= state.visible

    support = {"cell": frozenset(str(i) for i in range(20))}
    affected = frozenset(str(i) for i in range(5))
    assert cell_marks(support, affected)["cell"] == "partially_affected"


# -- 5. case-shaped drilldown scenario --------------------------------------------------


def test_case_shaped_scenario():
    """200 configurations, exactly 35 with the designated charged pair:
    remove-complement leaves 35 visible; a follow-up amino-acid presence
    filter isolates the single planted configuration."""
    raw, info = case_shaped_ensemble(seed=7)
    ensemble = build_hierarchy(raw)
    assert len(ensemble.all_cc_ids) == 200
    queue = FilterQueue(ensemble.all_cc_ids)
    queue.add_filter(
        "remove_complement", SubjectSpec.aaps([info["designated_aap"]])
    )
    state = evaluate(queue, ensemble)
    assert len(state.visible) == 35
    assert state.visible == frozenset(info["aap_ccs"])

    queue.add_filter("remove_complement", SubjectSpec.aas([info["designated_aa"]]))
    state = evaluate(queue, ensemble)
    assert state.visible == frozenset({info["planted_cc"]})


# -- 6. condensed-view boundary -----------------------------------------------------------


def test_condensed_view_boundary():
    """Non-interacting runs of exactly 25 residues stay; 26 collapse."""
    for run, collapsed in ((25, False), (26, True)):
        n = run + 2
        ensemble = build_hierarchy(
            planted_ensemble(
                {"A": list(range(1, n + 1)), "B": [1, 2]},
                {"0": [(("A", 1), ("B", 1)), (("A", n), ("B", 2))]},
            )
        )
        model = protein_view_model(ensemble, "A", ensemble.all_cc_ids, condensed=True)
        kinds = [e["kind"] for e in model.entries]
        if collapsed:
            assert kinds == ["aa", "gap", "aa"]
            assert model.entries[1]["length"] == 26
        else:
            assert kinds == ["aa"] * n


# -- 7. superposition ------------------------------------------------------------------------


def test_kabsch_acceptance():
    """100 random rigid motions recovered with transform error <= 1e-8 and
    post-superposition RMSD <= 1e-8; mirrored input yields det(R) = +1."""
    rng = np.random.default_rng(505)
    for _ in range(100):
        P = rng.normal(size=(int(rng.integers(4, 60)), 3)) * rng.uniform(1, 20)
        R = random_rotation(rng)
        t = rng.uniform(-100, 100, 3)
        Q = P @ R.T + t
        recovered = kabsch_superpose(P, Q)
        assert np.abs(recovered.rotation - R).max() <= 1e-8
        assert np.abs(recovered.translation - t).max() <= 1e-8
        assert rmsd(recovered.apply(P), Q) <= 1e-8
    mirrored = rng.normal(size=(30, 3))
    flipped = mirrored.copy()
    flipped[:, 2] *= -1
    transform = kabsch_superpose(flipped, mirrored)
    assert abs(np.linalg.det(transform.rotation) - 1.0) <= 1e-9


# -- 8. density estimator ---------------------------------------------------------------------


def test_kde_acceptance():
    """Grid values match the naive untruncated summation within relative
    1e-6 (of the field maximum); the single-atom value at distance sigma is
    exp(-1/2) within 1e-9; rotation equivariance within 1e-9."""
    rng = np.random.default_rng(606)
    centers = rng.uniform(-5, 5, size=(80, 3))
    sigmas = rng.choice([1.52, 1.55, 1.70, 1.80], size=80)
    field = _field_from_atoms(centers, sigmas, spacing=0.8, truncation_sigmas=6.5, channel=None)
    naive = naive_density(centers, sigmas, field.grid_points())
    assert np.abs(field.values.reshape(-1) - naive).max() <= 1e-6 * naive.max()

    sigma = 1.5
    at_sigma = density_at_points(
        np.zeros((1, 3)), np.array([sigma]), np.array([[0.0, sigma, 0.0]])
    )[0]
    assert abs(at_sigma - np.exp(-0.5)) <= 1e-9

    points = rng.uniform(-6, 6, size=(60, 3))
    R = random_rotation(rng)
    shift = rng.uniform(-4, 4, 3)
    before = density_at_points(centers, sigmas, points)
    after = density_at_points(centers @ R.T + shift, sigmas, points @ R.T + shift)
    assert np.abs(before - after).max() <= 1e-9


# -- 9. isosurface -----------------------------------------------------------------------------


def test_isosurface_acceptance():
    """Single-Gaussian field on a 64^3 grid at iso exp(-1/2): closed mesh
    (every edge shared by exactly 2 triangles), vertex radii within
    sigma +/- spacing; two separated atoms give 2 components. Runtime < 2 s."""
    start = time.perf_counter()
    sigma = 1.5
    spacing = 9.0 / 63.0  # 64 nodes across the 3-sigma margin box
    bounds = (np.full(3, -4.5), np.full(3, 4.5))
    field = _field_from_atoms(
        np.zeros((1, 3)), np.array([sigma]), spacing, 6.5, "x", bounds=bounds
    )
    assert field.dims == (64, 64, 64)
    mesh = extract_isosurface(field, float(np.exp(-0.5)))
    degrees = mesh_edge_degrees(mesh.triangles)
    assert set(degrees.values()) == {2}
    radii = np.linalg.norm(mesh.vertices, axis=1)
    assert radii.min() >= sigma - spacing and radii.max() <= sigma + spacing

    two = _field_from_atoms(
        np.array([[0.0, 0.0, 0.0], [30.0, 0.0, 0.0]]),
        np.array([sigma, sigma]),
        0.4,
        6.5,
        "x",
    )
    mesh2 = extract_isosurface(two, float(np.exp(-0.5)))
    assert mesh_component_count(len(mesh2.vertices), mesh2.triangles) == 2
    elapsed = time.perf_counter() - start
    assert elapsed < 2.0, f"isosurface acceptance took {elapsed:.2f}s"


# -- 10. exploded layout -----------------------------------------------------------------------


def test_exploded_layout_acceptance():
    """20 random 3-6 protein complexes: final min inter-protein distance
    >= gap and displacement directions within 15 degrees of the original
    centroid rays."""
    rng = np.random.default_rng(707)
    gap = 10.0
    for _ in range(20):
        n = int(rng.integers(3, 7))
        coords = {
            f"P{i}": blob_coords(
                rng, 40, rng.uniform(4, 9), center=rng.normal(scale=12.0, size=3)
            )
            for i in range(n)
        }
        layout = exploded_layout(coords, gap=gap)
        moved = {p: coords[p] + layout.transforms[p].translation for p in coords}
        min_dist = min(
            cdist(moved[p], moved[q]).min() for p, q in combinations(sorted(coords), 2)
        )
        assert min_dist >= gap
        complex_centroid = np.concatenate(list(coords.values())).mean(axis=0)
        for p, xyz in coords.items():
            t = layout.transforms[p].translation
            if np.linalg.norm(t) < 1e-9:
                continue
            ray = xyz.mean(axis=0) - complex_centroid
            cosang = np.dot(t, ray) / (np.linalg.norm(t) * np.linalg.norm(ray))
            angle = np.degrees(np.arccos(np.clip(cosang, -1.0, 1.0)))
            assert angle <= 15.0


# -- 11. build scaling --------------------------------------------------------------------------


def _timed_build(m, n, seed=0, repeat=3):
    raw = random_ensemble(
        n_proteins=m, n_ccs=n, n_residues=40, atoms_per_residue=5, seed=seed, crowding=8.0
    )
    best = float("inf")
    ensemble = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        ensemble = build_hierarchy(raw)
        best = min(best, time.perf_counter() - t0)
    return best, ensemble


def test_scaling_acceptance():
    """Hierarchy build time grows 1.5-3.0x when the configuration count
    doubles (4 proteins, n in 100/200/400) and 2.5-6.0x when the protein
    count doubles (100 configurations, m in 2/4/8); a 500-configuration,
    8-protein build finishes under 5 minutes and filter re-evaluation on it
    under 100 ms."""
    t_n = {n: _timed_build(4, n)[0] for n in (100, 200, 400)}
    ratio_200 = t_n[200] / t_n[100]
    ratio_400 = t_n[400] / t_n[200]
    assert 1.5 <= ratio_200 <= 3.0, f"n-doubling 100->200 ratio {ratio_200:.2f}"
    assert 1.5 <= ratio_400 <= 3.0, f"n-doubling 200->400 ratio {ratio_400:.2f}"

    t_m = {m: _timed_build(m, 100)[0] for m in (2, 4, 8)}
    ratio_4 = t_m[4] / t_m[2]
    ratio_8 = t_m[8] / t_m[4]
    assert 2.5 <= ratio_4 <= 6.0, f"m-doubling 2->4 ratio {ratio_4:.2f}"
    assert 2.5 <= ratio_8 <= 6.0, f"m-doubling 4->8 ratio {ratio_8:.2f}"

    start = time.perf_counter()
    big_raw = random_ensemble(
        n_proteins=8, n_ccs=500, n_residues=40, atoms_per_residue=5, seed=1, crowding=8.0
    )
    ensemble = build_hierarchy(big_raw)
    build_time = time.perf_counter() - start
    assert build_time < 300.0, f"500x8 build took {build_time:.1f}s"

    queue = FilterQueue(ensemble.all_cc_ids)
    ids = sorted(ensemble.all_cc_ids)
    queue.add_filter("remove", SubjectSpec.ccs(ids[:100]))
    queue.add_filter("remove_complement", SubjectSpec.ccs(ids[50:450]))
    queue.add_filter("fix", SubjectSpec.ccs(ids[:10]))
    queue.add_filter("remove_complement", SubjectSpec.aaps([next(iter(ensemble.aap_ccs))]))
    evaluate(queue, ensemble)  # warm
    start = time.perf_counter()
    evaluate(queue, ensemble)
    reeval = time.perf_counter() - start
    assert reeval < 0.1, f"filter re-evaluation took {reeval * 1000:.1f} ms"


# -- 12. CLI-server equivalence -------------------------------------------------------------------


ACCEPTANCE_SCRIPTS = {
    "case_drilldown.txt": (
        "primary_protein A\n"
        "primary_ppe A B\n"
        "remove_complement aap A:299 B:222\n"
        "remove_complement aa C:261\n"
    ),
    "mixed_kinds.txt": (
        "remove cc 000 001 002 003\n"
        "fix cc 002\n"
        "remove ppe B C\n"
        "add cc 001\n"
    ),
}


def test_cli_server_equivalence(tmp_path):
    """Every acceptance filter script produces identical visible sets and
    aggregate payloads through the CLI and through the HTTP API."""
    raw, info = case_shaped_ensemble(seed=7)
    paths = write_ensemble_files(raw, tmp_path / "ens")
    client = TestClient(create_app())

    for name, text in ACCEPTANCE_SCRIPTS.items():
        script = tmp_path / name
        script.write_text(text)
        out = tmp_path / f"out_{name}"
        code = main(
            [
                "run",
                "--input", str(paths["input"]),
                "--mapping", str(paths["mapping"]),
                "--script", str(script),
                "--export", f"visible:{out}/visible.txt",
                "--export", f"aggregates:{out}/aggregates.csv",
            ]
        )
        assert code == EXIT_OK
        cli_visible = [
            line
            for line in (out / "visible.txt").read_text().splitlines()
            if not line.startswith("#")
        ]
        cli_aggregates = [
            line
            for line in (out / "aggregates.csv").read_text().splitlines()
            if not line.startswith("#")
        ][1:]

        response = client.post(
            "/sessions",
            json={"input": str(paths["input"]), "mapping": str(paths["mapping"])},
        )
        sid = response.json()["session"]
        assert (
            client.post(f"/sessions/{sid}/filters/script", json={"script": text}).status_code
            == 200
        )
        api_visible = [
            row["cc"]
            for row in client.get(f"/sessions/{sid}/properties").json()["configurations"]
            if row["state"] != "hidden"
        ]
        assert cli_visible == api_visible

        api_rows = client.get(f"/sessions/{sid}/aggregates").json()["pairs"]
        api_aggregates = [
            f"{row['pair'][0]},{row['pair'][1]},{row['n_ppcs']},{row['n_unique_aap']},"
            + ("" if row["consistency"] is None else f"{row['consistency']:.12g}")
            for row in api_rows
        ]
        assert cli_aggregates == api_aggregates
