"""Geometry for the 3D views: rigid superposition onto a primary protein,
Gaussian density fields of partner-protein positions, isosurface meshes,
and the exploded per-configuration layout.

The density estimator is a kernel sum with an isotropic Gaussian per atom
whose bandwidth is the atom's Van der Waals radius (so the density models
the protein surface). Kernel peaks are unnormalized (1 per atom) and iso
levels are expressed as fractions of each field's maximum, which keeps
levels stable across ensemble sizes.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping

import numpy as np
from scipy.spatial import cKDTree
from skimage.measure import marching_cubes

from .constants import vdw_radius
from .errors import DegenerateGeometryError, InputError
from .hierarchy import ComplexEnsemble

__all__ = [
    "RigidTransform",
    "kabsch_superpose",
    "rmsd",
    "DensityField",
    "density_at_points",
    "compute_density",
    "TriangleMesh",
    "extract_isosurface",
    "ExplodedLayout",
    "exploded_layout",
    "DEFAULT_SPACING",
    "DEFAULT_ISO_FRACTION",
    "DEFAULT_TRUNCATION_SIGMAS",
]

DEFAULT_SPACING = 1.0
DEFAULT_ISO_FRACTION = 0.10
# Gaussian tails are cut beyond this many bandwidths. 6.5 sigma keeps the
# dropped tail below 7e-10 per atom so grid values agree with an exact
# summation to much better than 1e-6 of the field maximum.
DEFAULT_TRUNCATION_SIGMAS = 6.5
GRID_MARGIN_SIGMAS = 3.0
MAX_GRID_CELLS = 512 ** 3


@dataclass(frozen=True, eq=False)
class RigidTransform:
    """Proper rigid motion x -> R x + t (rotation is orthonormal, det +1)."""

    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        R = np.asarray(self.rotation, dtype=np.float64)
        if R.shape != (3, 3):
            raise InputError("rotation must be a 3x3 matrix")
        if not np.allclose(R.T @ R, np.eye(3), atol=1e-9):
            raise InputError("rotation is not orthonormal within 1e-9")
        if abs(np.linalg.det(R) - 1.0) > 1e-9:
            raise InputError("rotation determinant differs from +1 by more than 1e-9")

    @classmethod
    def identity(cls) -> "RigidTransform":
        return cls(np.eye(3), np.zeros(3))

    @classmethod
    def translation_only(cls, t: np.ndarray) -> "RigidTransform":
        return cls(np.eye(3), np.asarray(t, dtype=np.float64))

    def apply(self, coords: np.ndarray) -> np.ndarray:
        return np.asarray(coords) @ self.rotation.T + self.translation


def rmsd(a: np.ndarray, b: np.ndarray) -> float:
    diff = np.asarray(a, dtype=np.float64) - np.asarray(b, dtype=np.float64)
    return float(np.sqrt((diff * diff).sum() / len(diff)))


def kabsch_superpose(moving: np.ndarray, target: np.ndarray) -> RigidTransform:
    """Least-squares optimal proper rigid motion taking `moving` onto
    `target` (identical atom ordering). Reflections are excluded: the
    returned rotation always has determinant +1.
    """
    P = np.asarray(moving, dtype=np.float64)
    Q = np.asarray(target, dtype=np.float64)
    if P.shape != Q.shape or P.ndim != 2 or P.shape[1] != 3:
        raise InputError("superposition needs two equal (n, 3) coordinate arrays")
    if len(P) < 3:
        raise DegenerateGeometryError("superposition needs at least 3 atoms")
    cm = P.mean(axis=0)
    ct = Q.mean(axis=0)
    P0 = P - cm
    singular = np.linalg.svd(P0, compute_uv=False)
    if singular[1] <= max(1e-9 * singular[0], 1e-12):
        raise DegenerateGeometryError("superposition input atoms are collinear")

    H = P0.T @ (Q - ct)
    U, _, Vt = np.linalg.svd(H)
    d = np.sign(np.linalg.det(Vt.T @ U.T))
    D = np.diag([1.0, 1.0, d if d != 0 else 1.0])
    R = Vt.T @ D @ U.T
    return RigidTransform(R, ct - R @ cm)


# ---------------------------------------------------------------------------
# density fields


@dataclass(eq=False)
class DensityField:
    """Regular scalar grid: values[i, j, k] sampled at origin + spacing*(i,j,k)."""

    origin: np.ndarray
    spacing: float
    values: np.ndarray
    channel: str | None = None

    def __post_init__(self):
        if self.spacing <= 0:
            raise InputError(f"grid spacing must be positive, got {self.spacing}")
        if self.values.size and (not np.isfinite(self.values).all() or self.values.min() < 0):
            raise InputError("density values must be finite and non-negative")

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.values.shape  # type: ignore[return-value]

    def grid_points(self) -> np.ndarray:
        axes = [self.origin[a] + self.spacing * np.arange(self.dims[a]) for a in range(3)]
        gx, gy, gz = np.meshgrid(*axes, indexing="ij")
        return np.stack([gx, gy, gz], axis=-1).reshape(-1, 3)


def density_at_points(
    centers: np.ndarray,
    sigmas: np.ndarray,
    points: np.ndarray,
    truncation_sigmas: float = DEFAULT_TRUNCATION_SIGMAS,
) -> np.ndarray:
    """Kernel-sum density at arbitrary points: sum over atoms of
    exp(-|x - c|^2 / (2 sigma^2)), with per-atom truncation."""
    centers = np.asarray(centers, dtype=np.float64).reshape(-1, 3)
    points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    sigmas = np.asarray(sigmas, dtype=np.float64).reshape(-1)
    out = np.zeros(len(points))
    if len(centers) == 0 or len(points) == 0:
        return out
    tree = cKDTree(centers)
    r_max = truncation_sigmas * sigmas.max()
    for i, neighbors in enumerate(tree.query_ball_point(points, r=r_max)):
        if not neighbors:
            continue
        idx = np.asarray(neighbors, dtype=np.intp)
        d2 = ((centers[idx] - points[i]) ** 2).sum(axis=1)
        sig = sigmas[idx]
        mask = d2 <= (truncation_sigmas * sig) ** 2
        out[i] = np.exp(-d2[mask] / (2.0 * sig[mask] ** 2)).sum()
    return out


def _scatter_gaussians(
    values: np.ndarray,
    origin: np.ndarray,
    spacing: float,
    centers: np.ndarray,
    sigmas: np.ndarray,
    truncation_sigmas: float,
) -> None:
    """Accumulate truncated Gaussians into the grid, vectorized over atom
    chunks grouped by bandwidth."""
    dims = np.array(values.shape)
    flat = values.reshape(-1)
    grid_points: np.ndarray | None = None
    for sigma in np.unique(sigmas):
        atoms = centers[sigmas == sigma]
        radius = truncation_sigmas * sigma
        half = int(np.ceil(radius / spacing)) + 1
        patch_cells = (2 * half + 1) ** 3
        if patch_cells >= values.size:
            # the truncation sphere covers the whole grid: evaluating every
            # grid point densely is cheaper than building per-atom patches
            if grid_points is None:
                axes = [origin[a] + spacing * np.arange(dims[a]) for a in range(3)]
                gx, gy, gz = np.meshgrid(*axes, indexing="ij")
                grid_points = np.stack([gx, gy, gz], axis=-1).reshape(-1, 3)
            for astart in range(0, len(atoms), 8):
                chunk = atoms[astart : astart + 8]
                block_size = max(1, 1_000_000 // len(chunk))
                for pstart in range(0, len(grid_points), block_size):
                    block = grid_points[pstart : pstart + block_size]
                    d2 = ((block[None, :, :] - chunk[:, None, :]) ** 2).sum(axis=-1)
                    contrib = np.where(
                        d2 <= radius * radius, np.exp(-d2 / (2.0 * sigma * sigma)), 0.0
                    ).sum(axis=0)
                    flat[pstart : pstart + block_size] += contrib
            continue
        offsets = np.stack(
            np.meshgrid(*([np.arange(-half, half + 1)] * 3), indexing="ij"), axis=-1
        ).reshape(-1, 3)
        chunk_size = max(1, int(2_000_000 // len(offsets)))
        for start in range(0, len(atoms), chunk_size):
            chunk = atoms[start : start + chunk_size]
            base = np.rint((chunk - origin) / spacing).astype(np.int64)
            nodes = base[:, None, :] + offsets[None, :, :]  # (k, P, 3)
            pos = origin + nodes * spacing
            d2 = ((pos - chunk[:, None, :]) ** 2).sum(axis=-1)
            ok = (
                (d2 <= radius * radius)
                & (nodes >= 0).all(axis=-1)
                & (nodes < dims).all(axis=-1)
            )
            if not ok.any():
                continue
            contrib = np.exp(-d2[ok] / (2.0 * sigma * sigma))
            linear = np.ravel_multi_index(tuple(nodes[ok].T), values.shape)
            np.add.at(flat, linear, contrib)


def _field_from_atoms(
    centers: np.ndarray,
    sigmas: np.ndarray,
    spacing: float,
    truncation_sigmas: float,
    channel: str | None,
    bounds: tuple[np.ndarray, np.ndarray] | None = None,
) -> DensityField:
    centers = np.asarray(centers, dtype=np.float64).reshape(-1, 3)
    sigmas = np.asarray(sigmas, dtype=np.float64).reshape(-1)
    if len(centers) == 0:
        if bounds is None:
            return DensityField(np.zeros(3), spacing, np.zeros((2, 2, 2)), channel)
        lo, hi = bounds
    elif bounds is None:
        margin = GRID_MARGIN_SIGMAS * sigmas.max()
        lo = centers.min(axis=0) - margin
        hi = centers.max(axis=0) + margin
    else:
        lo, hi = bounds
    dims = np.maximum(np.ceil((hi - lo) / spacing).astype(np.int64) + 1, 2)
    if int(np.prod(dims)) > MAX_GRID_CELLS:
        raise InputError(
            f"density grid {tuple(dims)} exceeds {MAX_GRID_CELLS} cells; "
            "increase the spacing"
        )
    values = np.zeros(tuple(dims))
    if len(centers):
        _scatter_gaussians(values, lo, spacing, centers, sigmas, truncation_sigmas)
    return DensityField(lo.astype(np.float64), spacing, values, channel)


def compute_density(
    ensemble: ComplexEnsemble,
    primary: str,
    visible_ccs: frozenset[str] | set[str],
    spacing: float = DEFAULT_SPACING,
    bandwidth_scale: float = 1.0,
    truncation_sigmas: float = DEFAULT_TRUNCATION_SIGMAS,
    reference_cc: str | None = None,
) -> dict[str, DensityField]:
    """Partner-protein occurrence density around the primary protein.

    Every visible configuration is superposed onto the primary protein of
    the reference configuration (the lowest visible id unless designated),
    then each partner protein that contacts the primary in at least one
    visible configuration gets its own channel summed over all visible
    configurations. All channels share one grid so iso levels compare.
    """
    if spacing <= 0:
        raise InputError(f"grid spacing must be positive, got {spacing}")
    visible = frozenset(visible_ccs)
    if not visible:
        raise InputError("density needs at least one visible configuration")
    ensemble.protein(primary)

    if reference_cc is None:
        reference_cc = ensemble.sorted_cc_ids(visible)[0]
    reference = ensemble.configuration(reference_cc)

    partners = sorted(
        q
        for pair, ccs in ensemble.pair_ccs.items()
        if primary in pair and ccs & visible
        for q in pair
        if q != primary
    )
    partners = list(dict.fromkeys(partners))

    target = reference.coords[primary]
    atom_sets: dict[str, list[np.ndarray]] = {q: [] for q in partners}
    sigma_sets: dict[str, list[np.ndarray]] = {q: [] for q in partners}
    base_sigmas = {
        q: np.array([vdw_radius(e) for e in ensemble.protein(q).atom_elements])
        * bandwidth_scale
        for q in partners
    }
    for cc_id in ensemble.sorted_cc_ids(visible):
        cc = ensemble.configuration(cc_id)
        transform = (
            RigidTransform.identity()
            if cc_id == reference_cc
            else kabsch_superpose(cc.coords[primary], target)
        )
        for q in partners:
            atom_sets[q].append(transform.apply(cc.coords[q]))
            sigma_sets[q].append(base_sigmas[q])

    all_centers = {
        q: np.concatenate(atom_sets[q]) if atom_sets[q] else np.zeros((0, 3))
        for q in partners
    }
    all_sigmas = {
        q: np.concatenate(sigma_sets[q]) if sigma_sets[q] else np.zeros(0)
        for q in partners
    }
    bounds = None
    if partners:
        stacked = np.concatenate([all_centers[q] for q in partners])
        margin = GRID_MARGIN_SIGMAS * max(
            (s.max() for s in all_sigmas.values() if len(s)), default=1.0
        )
        bounds = (stacked.min(axis=0) - margin, stacked.max(axis=0) + margin)

    return {
        q: _field_from_atoms(
            all_centers[q], all_sigmas[q], spacing, truncation_sigmas, q, bounds
        )
        for q in partners
    }


# ---------------------------------------------------------------------------
# isosurfaces


@dataclass(eq=False)
class TriangleMesh:
    vertices: np.ndarray  # (V, 3) float64
    triangles: np.ndarray  # (T, 3) int
    normals: np.ndarray  # (V, 3) outward (toward lower density)
    channel: str | None = None
    iso: float = 0.0

    def __post_init__(self):
        if len(self.triangles) and (
            self.triangles.min() < 0 or self.triangles.max() >= len(self.vertices)
        ):
            raise InputError("triangle indices out of vertex range")

    @property
    def is_empty(self) -> bool:
        return len(self.triangles) == 0


def _empty_mesh(channel: str | None, iso: float) -> TriangleMesh:
    return TriangleMesh(
        np.zeros((0, 3)), np.zeros((0, 3), dtype=np.int64), np.zeros((0, 3)), channel, iso
    )


def extract_isosurface(field: DensityField, iso: float) -> TriangleMesh:
    """Marching-cubes surface of the field at the given level.

    Vertices are linearly interpolated along cell edges; normals follow the
    descending density gradient (outward for a blob-like field). An iso
    level above the field maximum yields a valid empty mesh. Degenerate
    zero-area triangles are dropped and unused vertices pruned.
    """
    if iso <= 0:
        raise InputError(f"iso level must be positive, got {iso}")
    values = field.values
    if values.size == 0 or iso >= values.max() or iso <= values.min():
        return _empty_mesh(field.channel, iso)
    verts, faces, normals, _ = marching_cubes(
        values,
        level=iso,
        spacing=(field.spacing,) * 3,
        gradient_direction="descent",
    )
    verts = verts + field.origin

    # weld coincident vertices (the extractor leaves duplicates when the
    # level passes exactly through grid nodes), drop degenerate triangles,
    # then prune orphaned vertices
    quantum = field.spacing * 1e-7
    keyed = np.round(verts / quantum).astype(np.int64)
    _, first_index, inverse = np.unique(
        keyed, axis=0, return_index=True, return_inverse=True
    )
    faces = inverse[faces]
    verts = verts[first_index]
    normals = normals[first_index]

    v0, v1, v2 = (verts[faces[:, i]] for i in range(3))
    areas = 0.5 * np.linalg.norm(np.cross(v1 - v0, v2 - v0), axis=1)
    distinct = (
        (faces[:, 0] != faces[:, 1])
        & (faces[:, 1] != faces[:, 2])
        & (faces[:, 0] != faces[:, 2])
    )
    faces = faces[(areas > 1e-12 * field.spacing**2) & distinct]
    faces = _drop_duplicate_faces(faces)
    if len(faces) == 0:
        return _empty_mesh(field.channel, iso)
    used = np.unique(faces)
    remap = np.full(len(verts), -1, dtype=np.int64)
    remap[used] = np.arange(len(used))
    return TriangleMesh(
        vertices=verts[used],
        triangles=remap[faces],
        normals=normals[used],
        channel=field.channel,
        iso=iso,
    )


def _drop_duplicate_faces(faces: np.ndarray) -> np.ndarray:
    """Remove repeated triangles (same vertex set), which appear in pairs
    when the surface grazes a grid node exactly."""
    if len(faces) == 0:
        return faces
    keys = np.sort(faces, axis=1)
    _, index, counts = np.unique(keys, axis=0, return_index=True, return_counts=True)
    return faces[np.sort(index[counts == 1])] if (counts > 1).any() else faces


# ---------------------------------------------------------------------------
# exploded layout


@dataclass(eq=False)
class ExplodedLayout:
    """Translation-only transforms separating the proteins of one
    configuration while preserving their directions from the complex
    centroid."""

    transforms: dict[str, RigidTransform]
    gap: float
    converged: bool
    iterations: int


def _pair_min_distance(
    tree_q: cKDTree, coords_p: np.ndarray, offset: np.ndarray
) -> float:
    d, _ = tree_q.query(coords_p + offset, k=1)
    return float(np.min(d))


def exploded_layout(
    coords: Mapping[str, np.ndarray],
    gap: float,
    max_iters: int = 500,
    repulsion_gain: float = 1.0,
) -> ExplodedLayout:
    """Push proteins apart along their original centroid rays until every
    pairwise minimum atom distance reaches the gap.

    Pairwise repulsion acts along the centroid difference when a pair is
    closer than the gap; each protein moves by the outward-ray projection
    of its net repulsion, so displacement directions match the original
    centroid rays by construction. A protein sitting on the complex
    centroid (degenerate ray) stays put. Non-convergence within max_iters
    returns the best-effort layout with a warning.
    """
    if gap <= 0:
        raise InputError(f"gap must be positive, got {gap}")
    names = sorted(coords)
    if len(names) <= 1:
        return ExplodedLayout(
            {name: RigidTransform.identity() for name in names}, gap, True, 0
        )

    xyz = {p: np.asarray(coords[p], dtype=np.float64) for p in names}
    centroids = {p: xyz[p].mean(axis=0) for p in names}
    complex_centroid = np.concatenate([xyz[p] for p in names]).mean(axis=0)
    ray: dict[str, np.ndarray] = {}
    for p in names:
        v = centroids[p] - complex_centroid
        n = np.linalg.norm(v)
        ray[p] = v / n if n > 1e-9 else np.zeros(3)
    trees = {p: cKDTree(xyz[p]) for p in names}
    shift = {p: 0.0 for p in names}  # displacement magnitude along the ray
    margin = 0.05 * gap

    converged = False
    iteration = 0
    for iteration in range(1, max_iters + 1):
        push = {p: 0.0 for p in names}
        violated = False
        for p, q in combinations(names, 2):
            offset = shift[p] * ray[p] - shift[q] * ray[q]
            min_d = _pair_min_distance(trees[q], xyz[p], offset)
            if min_d >= gap:
                continue
            violated = True
            deficit = (gap - min_d) + margin
            dirvec = (centroids[p] + shift[p] * ray[p]) - (
                centroids[q] + shift[q] * ray[q]
            )
            norm = np.linalg.norm(dirvec)
            dirvec = dirvec / norm if norm > 1e-9 else ray[p] - ray[q]
            for name, sign in ((p, 1.0), (q, -1.0)):
                if not ray[name].any():
                    continue  # degenerate ray: protein stays put
                proj = float(np.dot(sign * dirvec, ray[name]))
                push[name] += repulsion_gain * deficit * max(proj, 0.1)
        if not violated:
            converged = True
            break
        for p in names:
            shift[p] = max(0.0, shift[p] + push[p])

    if not converged:
        converged = all(
            _pair_min_distance(trees[q], xyz[p], shift[p] * ray[p] - shift[q] * ray[q])
            >= gap
            for p, q in combinations(names, 2)
        )
        if not converged:
            warnings.warn(
                f"exploded layout did not reach gap {gap} within {max_iters} "
                "iterations; returning best effort",
                RuntimeWarning,
                stacklevel=2,
            )
    return ExplodedLayout(
        transforms={
            p: RigidTransform.translation_only(shift[p] * ray[p]) for p in names
        },
        gap=gap,
        converged=converged,
        iterations=iteration,
    )
