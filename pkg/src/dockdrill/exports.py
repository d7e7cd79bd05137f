"""Artifact writers: binary STL meshes, OpenDX volumetric grids, compact
indexed-triangle JSON payloads, and provenance headers for text exports."""

from __future__ import annotations

import hashlib
import io
import struct
from pathlib import Path

import numpy as np

from . import __version__
from .spatial import DensityField, TriangleMesh

__all__ = [
    "stl_bytes",
    "write_stl",
    "density_dx_text",
    "write_density_dx",
    "mesh_payload",
    "file_sha256",
    "provenance_lines",
]


def file_sha256(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for block in iter(lambda: handle.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def provenance_lines(inputs: dict[str, str], comment: str = "#") -> list[str]:
    """Comment lines recording tool version and input hashes, prepended to
    text exports for reproducibility."""
    lines = [f"{comment} tool: dockdrill {__version__}"]
    for label, value in inputs.items():
        lines.append(f"{comment} {label}: {value}")
    return lines


def stl_bytes(mesh: TriangleMesh, label: str = "") -> bytes:
    """Binary STL: 80-byte header, uint32 count, then per-triangle normal +
    three vertices as little-endian float32 plus a zero attribute word."""
    header = f"dockdrill {__version__} {label}".encode()[:80].ljust(80, b"\0")
    verts = mesh.vertices.astype(np.float32)
    out = io.BytesIO()
    out.write(header)
    out.write(struct.pack("<I", len(mesh.triangles)))
    for tri in mesh.triangles:
        a, b, c = verts[tri[0]], verts[tri[1]], verts[tri[2]]
        n = np.cross(b - a, c - a)
        norm = np.linalg.norm(n)
        n = n / norm if norm > 0 else n
        out.write(struct.pack("<12fH", *n, *a, *b, *c, 0))
    return out.getvalue()


def write_stl(mesh: TriangleMesh, path: str | Path, label: str = "") -> None:
    Path(path).write_bytes(stl_bytes(mesh, label))


def mesh_payload(mesh: TriangleMesh) -> dict:
    """Indexed-triangle JSON payload (flat coordinate lists)."""
    return {
        "channel": mesh.channel,
        "iso": mesh.iso,
        "vertex_count": int(len(mesh.vertices)),
        "triangle_count": int(len(mesh.triangles)),
        "vertices": np.round(mesh.vertices, 5).reshape(-1).tolist(),
        "normals": np.round(mesh.normals, 5).reshape(-1).tolist(),
        "triangles": mesh.triangles.reshape(-1).tolist(),
    }


def density_dx_text(field: DensityField, comments: list[str] | None = None) -> str:
    """OpenDX scalar grid, readable by PyMOL/VMD/Chimera. Data order is
    C-contiguous over (x, y, z) with z fastest, matching the format."""
    nx, ny, nz = field.dims
    ox, oy, oz = field.origin
    s = field.spacing
    lines = list(comments or [])
    lines += [
        f"object 1 class gridpositions counts {nx} {ny} {nz}",
        f"origin {ox:.6f} {oy:.6f} {oz:.6f}",
        f"delta {s:.6f} 0 0",
        f"delta 0 {s:.6f} 0",
        f"delta 0 0 {s:.6f}",
        f"object 2 class gridconnections counts {nx} {ny} {nz}",
        f"object 3 class array type double rank 0 items {nx * ny * nz} data follows",
    ]
    flat = field.values.reshape(-1)
    for start in range(0, len(flat), 3):
        lines.append(" ".join(f"{v:.6e}" for v in flat[start : start + 3]))
    lines += [
        'attribute "dep" string "positions"',
        'object "density" class field',
        'component "positions" value 1',
        'component "connections" value 2',
        'component "data" value 3',
    ]
    return "\n".join(lines) + "\n"


def write_density_dx(field: DensityField, path: str | Path, comments: list[str] | None = None) -> None:
    Path(path).write_text(density_dx_text(field, comments))
