"""Synthetic ensemble generators for tests, benchmarks, and demos.

Two families:

* `random_ensemble` places rigid random protein blobs in a box, giving
  realistic-looking contact statistics for benchmarking and oracle tests.
* `planted_ensemble` realizes an exact contact plan: each planned
  residue-residue contact meets at its own isolated rendezvous point
  (3 A apart, well under the default cutoff), every other residue sits on
  a far-away per-protein shelf, so a configuration contains precisely the
  planned amino-acid pairs and nothing else.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .constants import STANDARD_RESIDUES
from .ingest import ChainMapping, ProteinTemplate, RawConfiguration, RawEnsemble
from .pdb import Atom, format_structure

__all__ = [
    "make_template",
    "random_ensemble",
    "planted_ensemble",
    "case_shaped_ensemble",
    "blob_coords",
    "random_rotation",
    "write_ensemble_files",
]

RESIDUE_CYCLE = tuple(STANDARD_RESIDUES)
CONTACT_DISTANCE = 3.0
RENDEZVOUS_SPACING = 60.0
# shelf geometry stays within the fixed-column coordinate range (%8.3f)
SHELF_BASE = 500.0
SHELF_STEP = 700.0
SHELF_X_STEP = 9.0

CHAIN_IDS = "ABCDEFGHIJKL"


def make_template(
    name: str,
    chain_index: int,
    residue_seqs: list[int],
    atoms_per_residue: int = 1,
    residue_names: dict[int, str] | None = None,
) -> ProteinTemplate:
    names = residue_names or {}
    seq_names = tuple(
        names.get(seq, RESIDUE_CYCLE[seq % len(RESIDUE_CYCLE)]) for seq in residue_seqs
    )
    n_atoms = len(residue_seqs) * atoms_per_residue
    return ProteinTemplate(
        name=name,
        chain_id=CHAIN_IDS[chain_index],
        color_index=chain_index,
        residue_seqs=tuple(residue_seqs),
        residue_names=seq_names,
        atom_elements=tuple(
            ("C", "N", "O", "S")[i % 4] for i in range(n_atoms)
        ),
        atom_residue_index=np.repeat(np.arange(len(residue_seqs)), atoms_per_residue),
        atom_serials=tuple(range(1, n_atoms + 1)),
    )


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    """Uniform random rotation matrix (QR of a Gaussian matrix, sign-fixed)."""
    A = rng.normal(size=(3, 3))
    Q, R = np.linalg.qr(A)
    Q = Q @ np.diag(np.sign(np.diag(R)))
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return Q


def blob_coords(
    rng: np.random.Generator, n_atoms: int, radius: float, center=(0.0, 0.0, 0.0)
) -> np.ndarray:
    """Roughly spherical atom cloud around a center."""
    pts = rng.normal(size=(n_atoms, 3))
    pts *= radius / np.maximum(np.linalg.norm(pts, axis=1, keepdims=True), 1e-9)
    pts *= rng.uniform(0.3, 1.0, size=(n_atoms, 1))
    return pts + np.asarray(center, dtype=np.float64)


def _chain_template_coords(
    rng: np.random.Generator, n_residues: int, atoms_per_residue: int
) -> np.ndarray:
    """Residues along a jittered curve, atoms jittered around each residue."""
    backbone = np.cumsum(rng.normal(loc=(3.0, 0.0, 0.0), scale=1.2, size=(n_residues, 3)), axis=0)
    atoms = np.repeat(backbone, atoms_per_residue, axis=0)
    atoms += rng.normal(scale=0.8, size=atoms.shape)
    return atoms - atoms.mean(axis=0)


def random_ensemble(
    n_proteins: int = 4,
    n_ccs: int = 100,
    n_residues: int = 24,
    atoms_per_residue: int = 4,
    seed: int = 0,
    crowding: float = 1.0,
    properties: bool = False,
) -> RawEnsemble:
    """Rigid random placements of per-protein templates.

    `crowding` scales the placement box inversely: larger values pack the
    proteins tighter and produce more contacts."""
    rng = np.random.default_rng(seed)
    names = [f"P{i}" for i in range(n_proteins)]
    templates = {
        name: make_template(
            name, i, list(range(1, n_residues + 1)), atoms_per_residue
        )
        for i, name in enumerate(names)
    }
    base_coords = {
        name: _chain_template_coords(rng, n_residues, atoms_per_residue)
        for name in names
    }
    extent = max(
        float(np.linalg.norm(xyz, axis=1).max()) for xyz in base_coords.values()
    )
    box = extent * max(1.0, n_proteins ** (1 / 3)) * 1.6 / max(crowding, 1e-6)

    configurations = []
    width = len(str(max(n_ccs - 1, 1)))
    for i in range(n_ccs):
        coords = {}
        for name in names:
            rotation = random_rotation(rng)
            translation = rng.uniform(-box, box, size=3)
            coords[name] = base_coords[name] @ rotation.T + translation
        props = (
            {"score": float(rng.normal()), "energy": float(rng.normal(scale=10.0))}
            if properties
            else {}
        )
        configurations.append(
            RawConfiguration(id=f"{i:0{width}d}", coords=coords, properties=props)
        )
    return RawEnsemble(proteins=templates, configurations=configurations)


def _contact_components(cc_id, contacts):
    """Group planned contacts into placeable components: isolated pairs or
    stars of up to three contacts sharing one hub residue. Yields
    (hub, satellites) placements."""
    adjacency: dict[tuple[str, int], set[tuple[str, int]]] = {}
    for aa_1, aa_2 in contacts:
        if aa_2 in adjacency.get(aa_1, ()):  # duplicate edge
            continue
        adjacency.setdefault(aa_1, set()).add(aa_2)
        adjacency.setdefault(aa_2, set()).add(aa_1)
    seen: set[tuple[str, int]] = set()
    for start in adjacency:
        if start in seen:
            continue
        stack, component = [start], set()
        while stack:
            v = stack.pop()
            if v in component:
                continue
            component.add(v)
            stack.extend(adjacency[v])
        seen |= component
        n_edges = sum(len(adjacency[v]) for v in component) // 2
        if n_edges == 1:
            hub, satellite = sorted(component)
            yield hub, [satellite]
            continue
        hubs = [v for v in component if len(adjacency[v]) == n_edges]
        if not hubs or n_edges > 3:
            raise ValueError(
                f"configuration {cc_id}: contact pattern around {sorted(component)} "
                "is not realizable (only isolated pairs and stars of <= 3 "
                "contacts around one residue are supported)"
            )
        hub = hubs[0]
        yield hub, sorted(component - {hub})


def planted_ensemble(
    protein_residues: dict[str, list[int]],
    contact_plan: dict[str, list[tuple[tuple[str, int], tuple[str, int]]]],
    residue_names: dict[str, dict[int, str]] | None = None,
    properties: dict[str, dict[str, float]] | None = None,
) -> RawEnsemble:
    """Build an ensemble containing exactly the planned contacts.

    contact_plan maps configuration id -> list of ((protein, seq),
    (protein, seq)) contacts. Within one configuration a residue may sit in
    several contacts only as the hub of a star (up to 3 partners); designed
    for the default 5 A cutoff."""
    names = list(protein_residues)
    res_names = residue_names or {}
    templates = {
        name: make_template(name, i, protein_residues[name], 1, res_names.get(name))
        for i, name in enumerate(names)
    }
    seq_index = {
        name: {seq: i for i, seq in enumerate(protein_residues[name])} for name in names
    }
    shelf = {
        name: np.array(
            [
                [i * SHELF_X_STEP, SHELF_BASE + k * SHELF_STEP + (i % 3) * 0.7, (i % 7) * 0.5]
                for i in range(len(protein_residues[name]))
            ]
        )
        for k, name in enumerate(names)
    }

    configurations = []
    for cc_id, contacts in contact_plan.items():
        coords = {name: shelf[name].copy() for name in names}
        for k, (center, satellites) in enumerate(_contact_components(cc_id, contacts)):
            meeting = np.array([k * RENDEZVOUS_SPACING, 0.0, -500.0])
            coords[center[0]][seq_index[center[0]][center[1]]] = meeting
            # satellites sit 120 degrees apart: 3 A from the hub (a contact)
            # but 3*sqrt(3) ~ 5.2 A from each other (no accidental contact)
            for j, aa in enumerate(satellites):
                angle = 2.0 * np.pi * j / 3.0
                coords[aa[0]][seq_index[aa[0]][aa[1]]] = meeting + CONTACT_DISTANCE * np.array(
                    [np.cos(angle), np.sin(angle), 0.0]
                )
        configurations.append(
            RawConfiguration(
                id=cc_id,
                coords=coords,
                properties=dict((properties or {}).get(cc_id, {})),
            )
        )
    return RawEnsemble(proteins=templates, configurations=configurations)


def case_shaped_ensemble(seed: int = 7):
    """A 200-configuration three-protein ensemble shaped like the drilldown
    walkthrough: exactly 35 configurations contain the designated charged
    amino-acid pair A:299(ARG)-B:222(ASP); exactly one of those 35 also has
    C:261(HIS) interacting, and C:261 interacts nowhere else.

    Returns (raw ensemble, info dict with 'designated_aap', 'designated_aa',
    'aap_ccs', 'planted_cc')."""
    rng = np.random.default_rng(seed)
    background = list(range(1, 31))
    protein_residues = {
        "A": background + [299],
        "B": background + [222],
        "C": background + [261],
    }
    residue_names = {
        "A": {299: "ARG"},
        "B": {222: "ASP"},
        "C": {261: "HIS"},
    }
    designated_aap = (("A", 299), ("B", 222))
    designated_aa = ("C", 261)

    cc_ids = [f"{i:03d}" for i in range(200)]
    with_aap = sorted(rng.choice(200, size=35, replace=False).tolist())
    aap_ccs = [cc_ids[i] for i in with_aap]
    planted_cc = aap_ccs[int(rng.integers(len(aap_ccs)))]

    pairs = (("A", "B"), ("A", "C"), ("B", "C"))
    plan: dict[str, list] = {}
    for i, cc_id in enumerate(cc_ids):
        contacts = []
        used: dict[str, set[int]] = {"A": set(), "B": set(), "C": set()}
        for _ in range(int(rng.integers(1, 5))):
            p, q = pairs[int(rng.integers(3))]
            free_p = [s for s in background if s not in used[p]]
            free_q = [s for s in background if s not in used[q]]
            if not free_p or not free_q:
                continue
            sp = int(rng.choice(free_p))
            sq = int(rng.choice(free_q))
            used[p].add(sp)
            used[q].add(sq)
            contacts.append(((p, sp), (q, sq)))
        if cc_id in aap_ccs:
            contacts.append((("A", 299), ("B", 222)))
        if cc_id == planted_cc:
            partner = int(rng.choice([s for s in background if s not in used["A"]]))
            used["A"].add(partner)
            contacts.append((("A", partner), ("C", 261)))
        plan[cc_id] = contacts

    raw = planted_ensemble(protein_residues, plan, residue_names)
    info = {
        "designated_aap": designated_aap,
        "designated_aa": designated_aa,
        "aap_ccs": aap_ccs,
        "planted_cc": planted_cc,
    }
    return raw, info


def _configuration_atoms(raw: RawEnsemble, cc: RawConfiguration) -> list[Atom]:
    atoms = []
    serial = 1
    for name, template in raw.proteins.items():
        xyz = cc.coords[name]
        for i in range(template.n_atoms):
            res_idx = int(template.atom_residue_index[i])
            atoms.append(
                Atom(
                    serial=serial,
                    element=template.atom_elements[i],
                    position=tuple(float(v) for v in xyz[i]),
                    residue_seq=template.residue_seqs[res_idx],
                    residue_name=template.residue_names[res_idx],
                    chain_id=template.chain_id,
                )
            )
            serial += 1
    return atoms


def write_ensemble_files(raw: RawEnsemble, directory: str | Path) -> dict[str, Path]:
    """Write one coordinate file per configuration plus mapping (and, when
    present, property) files. Returns the paths ({'input', 'mapping',
    'properties'?})."""
    directory = Path(directory)
    input_dir = directory / "structures"
    input_dir.mkdir(parents=True, exist_ok=True)
    for cc in raw.configurations:
        text = format_structure([(1, _configuration_atoms(raw, cc))])
        (input_dir / f"{cc.id}.pdb").write_text(text)

    mapping_path = directory / "mapping.csv"
    mapping_path.write_text(
        "".join(
            f"{t.chain_id},{t.name},{t.color_index}\n" for t in raw.proteins.values()
        )
    )
    out = {"input": input_dir, "mapping": mapping_path}

    prop_names: list[str] = []
    for cc in raw.configurations:
        for key in cc.properties:
            if key not in prop_names:
                prop_names.append(key)
    if prop_names:
        lines = ["id," + ",".join(prop_names)]
        for cc in raw.configurations:
            cells = [str(cc.properties[k]) if k in cc.properties else "" for k in prop_names]
            lines.append(cc.id + "," + ",".join(cells))
        properties_path = directory / "properties.csv"
        properties_path.write_text("\n".join(lines) + "\n")
        out["properties"] = properties_path
    return out


def mapping_of(raw: RawEnsemble) -> ChainMapping:
    return ChainMapping(
        tuple((t.chain_id, t.name, t.color_index) for t in raw.proteins.values())
    )
