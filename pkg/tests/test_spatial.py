import numpy as np
import pytest
from itertools import combinations

from scipy.spatial.distance import cdist

from dockdrill.errors import DegenerateGeometryError, InputError
from dockdrill.hierarchy import build_hierarchy
from dockdrill.spatial import (
    RigidTransform,
    _field_from_atoms,
    compute_density,
    density_at_points,
    exploded_layout,
    extract_isosurface,
    kabsch_superpose,
    rmsd,
)
from dockdrill.synthetic import blob_coords, random_ensemble, random_rotation

from oracles import mesh_component_count, mesh_edge_degrees, naive_density


# -- rigid transforms / Kabsch -------------------------------------------------


def test_rigid_transform_validation():
    with pytest.raises(InputError):
        RigidTransform(np.eye(3) * 2, np.zeros(3))
    reflection = np.diag([1.0, 1.0, -1.0])
    with pytest.raises(InputError):
        RigidTransform(reflection, np.zeros(3))


def test_kabsch_identity():
    P = np.random.default_rng(0).normal(size=(10, 3))
    tf = kabsch_superpose(P, P)
    assert np.allclose(tf.rotation, np.eye(3), atol=1e-12)
    assert np.allclose(tf.translation, 0, atol=1e-12)
    assert rmsd(tf.apply(P), P) < 1e-12


def test_kabsch_recovers_random_motions():
    rng = np.random.default_rng(1)
    for _ in range(100):
        P = rng.normal(size=(rng.integers(4, 40), 3)) * rng.uniform(1, 10)
        R = random_rotation(rng)
        t = rng.uniform(-50, 50, 3)
        Q = P @ R.T + t
        tf = kabsch_superpose(P, Q)
        assert np.abs(tf.rotation - R).max() < 1e-8
        assert np.abs(tf.translation - t).max() < 1e-8
        assert rmsd(tf.apply(P), Q) < 1e-8


def test_kabsch_mirror_gets_proper_rotation():
    rng = np.random.default_rng(2)
    P = rng.normal(size=(25, 3))
    M = P.copy()
    M[:, 0] *= -1
    tf = kabsch_superpose(M, P)
    assert np.linalg.det(tf.rotation) == pytest.approx(1.0, abs=1e-9)


def test_kabsch_degenerate_inputs():
    with pytest.raises(DegenerateGeometryError):
        kabsch_superpose(np.zeros((2, 3)), np.zeros((2, 3)))
    line = np.array([[0.0, 0, 0], [1, 0, 0], [2, 0, 0], [3, 0, 0]])
    with pytest.raises(DegenerateGeometryError):
        kabsch_superpose(line, line)


def test_kabsch_local_optimality_spot_check():
    rng = np.random.default_rng(3)
    P = rng.normal(size=(30, 3)) * 4
    Q = P @ random_rotation(rng).T + rng.uniform(-5, 5, 3) + rng.normal(scale=0.3, size=(30, 3))
    tf = kabsch_superpose(P, Q)
    best = rmsd(tf.apply(P), Q)
    for _ in range(100):
        axis = rng.normal(size=3)
        axis /= np.linalg.norm(axis)
        angle = rng.uniform(-0.05, 0.05)
        K = np.array(
            [[0, -axis[2], axis[1]], [axis[2], 0, -axis[0]], [-axis[1], axis[0], 0]]
        )
        Rp = np.eye(3) + np.sin(angle) * K + (1 - np.cos(angle)) * (K @ K)
        perturbed = RigidTransform(Rp @ tf.rotation, tf.translation + rng.normal(scale=0.05, size=3))
        assert rmsd(perturbed.apply(P), Q) >= best - 1e-12


# -- density -------------------------------------------------------------------


def test_zero_atoms_zero_field():
    field = _field_from_atoms(np.zeros((0, 3)), np.zeros(0), 1.0, 6.5, None)
    assert field.values.max() == 0.0


def test_single_atom_closed_form():
    sigma = 1.5
    value = density_at_points(
        np.zeros((1, 3)), np.array([sigma]), np.array([[sigma, 0.0, 0.0]])
    )
    assert value[0] == pytest.approx(np.exp(-0.5), abs=1e-9)
    center = density_at_points(np.zeros((1, 3)), np.array([sigma]), np.zeros((1, 3)))
    assert center[0] == pytest.approx(1.0, abs=1e-12)


def test_grid_matches_naive_summation():
    rng = np.random.default_rng(4)
    centers = rng.uniform(-4, 4, size=(50, 3))
    sigmas = rng.choice([1.52, 1.55, 1.7, 1.8], size=50)
    field = _field_from_atoms(centers, sigmas, spacing=0.9, truncation_sigmas=6.5, channel=None)
    naive = naive_density(centers, sigmas, field.grid_points())
    diff = np.abs(field.values.reshape(-1) - naive)
    assert diff.max() <= 1e-6 * naive.max()


def test_rotation_equivariance():
    rng = np.random.default_rng(5)
    centers = rng.uniform(-5, 5, size=(30, 3))
    sigmas = np.full(30, 1.7)
    points = rng.uniform(-6, 6, size=(40, 3))
    R = random_rotation(rng)
    t = rng.uniform(-3, 3, 3)
    v1 = density_at_points(centers, sigmas, points)
    v2 = density_at_points(centers @ R.T + t, sigmas, points @ R.T + t)
    assert np.abs(v1 - v2).max() < 1e-9


def test_compute_density_channels_and_superposition():
    raw = random_ensemble(n_proteins=3, n_ccs=5, n_residues=8, atoms_per_residue=3, seed=6, crowding=1.5)
    ensemble = build_hierarchy(raw)
    fields = compute_density(ensemble, "P0", ensemble.all_cc_ids, spacing=2.0)
    partners = {
        q
        for pair, ccs in ensemble.pair_ccs.items()
        if "P0" in pair
        for q in pair
        if q != "P0"
    }
    assert set(fields) == partners
    for field in fields.values():
        assert field.values.min() >= 0
        assert np.isfinite(field.values).all()
    with pytest.raises(InputError):
        compute_density(ensemble, "P0", frozenset(), spacing=2.0)
    with pytest.raises(InputError):
        compute_density(ensemble, "P0", ensemble.all_cc_ids, spacing=-1.0)


# -- isosurface ------------------------------------------------------------------


def single_gaussian_field(sigma=1.5, spacing=0.4):
    return _field_from_atoms(
        np.zeros((1, 3)), np.array([sigma]), spacing, 6.5, "x"
    )


def test_isosurface_sphere_radii_and_closedness():
    sigma, spacing = 1.5, 0.4
    mesh = extract_isosurface(single_gaussian_field(sigma, spacing), np.exp(-0.5))
    radii = np.linalg.norm(mesh.vertices, axis=1)
    assert radii.min() >= sigma - spacing
    assert radii.max() <= sigma + spacing
    degrees = mesh_edge_degrees(mesh.triangles)
    assert set(degrees.values()) == {2}
    assert mesh_component_count(len(mesh.vertices), mesh.triangles) == 1
    # outward normals: pointing away from the atom at the origin
    dots = (mesh.normals * mesh.vertices).sum(axis=1)
    assert (dots > 0).all()


def test_isosurface_exact_node_ties_still_closed():
    # spacing 0.5 with sigma 1.5 puts grid nodes exactly on the surface
    mesh = extract_isosurface(single_gaussian_field(1.5, 0.5), np.exp(-0.5))
    assert set(mesh_edge_degrees(mesh.triangles).values()) == {2}


def test_isosurface_two_atoms_two_components():
    field = _field_from_atoms(
        np.array([[0.0, 0.0, 0.0], [30.0, 0.0, 0.0]]),
        np.array([1.5, 1.5]),
        0.4,
        6.5,
        "x",
    )
    mesh = extract_isosurface(field, np.exp(-0.5))
    assert mesh_component_count(len(mesh.vertices), mesh.triangles) == 2


def test_isosurface_above_max_empty():
    mesh = extract_isosurface(single_gaussian_field(), 2.0)
    assert mesh.is_empty
    with pytest.raises(InputError):
        extract_isosurface(single_gaussian_field(), -0.1)


def test_no_degenerate_triangles():
    mesh = extract_isosurface(single_gaussian_field(1.5, 0.5), np.exp(-0.5))
    v = mesh.vertices
    v0, v1, v2 = v[mesh.triangles[:, 0]], v[mesh.triangles[:, 1]], v[mesh.triangles[:, 2]]
    areas = 0.5 * np.linalg.norm(np.cross(v1 - v0, v2 - v0), axis=1)
    assert (areas > 0).all()


# -- exploded layout --------------------------------------------------------------


def min_pair_distance(coords, layout):
    names = sorted(coords)
    moved = {p: coords[p] + layout.transforms[p].translation for p in names}
    return min(
        cdist(moved[p], moved[q]).min() for p, q in combinations(names, 2)
    )


def test_single_protein_identity():
    rng = np.random.default_rng(7)
    coords = {"A": blob_coords(rng, 30, 5.0)}
    layout = exploded_layout(coords, gap=10.0)
    assert layout.converged
    assert np.allclose(layout.transforms["A"].translation, 0.0)


def test_two_touching_blobs_separate_oppositely():
    rng = np.random.default_rng(8)
    coords = {
        "A": blob_coords(rng, 60, 8.0, center=(0, 0, 0)),
        "B": blob_coords(rng, 60, 8.0, center=(10, 0, 0)),
    }
    layout = exploded_layout(coords, gap=10.0)
    assert layout.converged
    assert min_pair_distance(coords, layout) >= 10.0
    ta = layout.transforms["A"].translation
    tb = layout.transforms["B"].translation
    assert ta[0] < 0 < tb[0]


def test_three_collinear_order_preserved():
    rng = np.random.default_rng(9)
    coords = {
        "A": blob_coords(rng, 50, 6.0, center=(-14, 0, 0)),
        "B": blob_coords(rng, 50, 6.0, center=(0, 0, 0)),
        "C": blob_coords(rng, 50, 6.0, center=(14, 0, 0)),
    }
    layout = exploded_layout(coords, gap=8.0)
    assert layout.converged
    assert min_pair_distance(coords, layout) >= 8.0
    xs = {
        p: (coords[p] + layout.transforms[p].translation).mean(axis=0)[0]
        for p in "ABC"
    }
    assert xs["A"] < xs["B"] < xs["C"]
    # every displacement stays on its original centroid ray
    complex_centroid = np.concatenate(list(coords.values())).mean(axis=0)
    for p in "ABC":
        t = layout.transforms[p].translation
        if np.linalg.norm(t) < 1e-9:
            continue
        ray = coords[p].mean(axis=0) - complex_centroid
        cosang = np.dot(t, ray) / (np.linalg.norm(t) * np.linalg.norm(ray))
        assert cosang > 0.999


def test_random_synthetics_gap_and_direction():
    rng = np.random.default_rng(10)
    for _ in range(10):
        n = int(rng.integers(3, 7))
        coords = {
            f"P{i}": blob_coords(rng, 40, rng.uniform(4, 9), center=rng.normal(scale=12.0, size=3))
            for i in range(n)
        }
        layout = exploded_layout(coords, gap=10.0)
        assert min_pair_distance(coords, layout) >= 10.0
        complex_centroid = np.concatenate(list(coords.values())).mean(axis=0)
        for p, xyz in coords.items():
            t = layout.transforms[p].translation
            if np.linalg.norm(t) < 1e-9:
                continue
            ray = xyz.mean(axis=0) - complex_centroid
            cosang = np.dot(t, ray) / (np.linalg.norm(t) * np.linalg.norm(ray))
            assert np.degrees(np.arccos(np.clip(cosang, -1, 1))) <= 15.0


def test_gap_must_be_positive():
    with pytest.raises(InputError):
        exploded_layout({"A": np.zeros((3, 3))}, gap=0.0)
