"""Ensemble ingestion: coordinate files -> named-protein configurations.

Input layout is either a directory with one single-model file per
configuration (configuration id = file stem) or one multi-model file
(configuration id = model number). A chain mapping names the proteins;
an optional delimited property table attaches per-configuration scores.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .constants import MAX_PROTEIN_COLORS, charge_class, hydrophobicity
from .errors import InputError, IntegrityError, MappingError
from .pdb import Atom, parse_structure_file

log = logging.getLogger(__name__)

__all__ = [
    "ChainMapping",
    "PropertyTable",
    "ProteinTemplate",
    "RawConfiguration",
    "RawEnsemble",
    "ReferenceStructure",
    "read_mapping_file",
    "read_property_table",
    "load_ensemble",
    "load_reference_configuration",
    "natural_id_sort",
]


@dataclass(frozen=True)
class ChainMapping:
    """Ordered chain -> (protein name, color index) assignment."""

    entries: tuple[tuple[str, str, int], ...]

    def __post_init__(self):
        chains = [e[0] for e in self.entries]
        names = [e[1] for e in self.entries]
        colors = [e[2] for e in self.entries]
        if len(set(chains)) != len(chains):
            raise MappingError("duplicate chain ids in mapping")
        if len(set(names)) != len(names):
            raise MappingError("duplicate protein names in mapping")
        if len(set(colors)) != len(colors):
            raise MappingError("duplicate color indices in mapping")
        bad = [c for c in colors if not 0 <= c < MAX_PROTEIN_COLORS]
        if bad:
            raise MappingError(
                f"color indices must be < {MAX_PROTEIN_COLORS}, got {bad}"
            )

    @classmethod
    def from_pairs(cls, pairs: list[tuple[str, str]]) -> "ChainMapping":
        return cls(tuple((c, p, i) for i, (c, p) in enumerate(pairs)))

    @property
    def chain_to_protein(self) -> dict[str, str]:
        return {c: p for c, p, _ in self.entries}

    @property
    def protein_names(self) -> tuple[str, ...]:
        return tuple(p for _, p, _ in self.entries)

    def color_of(self, protein: str) -> int:
        for _, name, color in self.entries:
            if name == protein:
                return color
        raise MappingError(f"protein {protein!r} not in mapping")


def read_mapping_file(path: str | Path) -> ChainMapping:
    """Parse `chain,protein_name[,color_index]` lines; '#' starts a comment."""
    entries = []
    used_colors: set[int] = set()
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.replace("\t", ",").split(",")]
        if len(parts) < 2 or not parts[0] or not parts[1]:
            raise MappingError(f"bad mapping line: {raw!r}")
        color = int(parts[2]) if len(parts) > 2 and parts[2] else None
        entries.append((parts[0], parts[1], color))
        if color is not None:
            used_colors.add(color)
    # fill unspecified colors with the lowest free indices, in file order
    free = (i for i in range(MAX_PROTEIN_COLORS) if i not in used_colors)
    resolved = tuple(
        (c, p, color if color is not None else next(free)) for c, p, color in entries
    )
    return ChainMapping(resolved)


@dataclass
class PropertyTable:
    """Per-configuration property values. Missing cells stay absent."""

    rows: dict[str, dict[str, float]]
    property_names: tuple[str, ...]

    def join(self, cc_ids: set[str]) -> dict[str, dict[str, float]]:
        """Rows restricted to known configuration ids; unknown ids are
        dropped with a warning."""
        out = {}
        for cc_id, row in self.rows.items():
            if cc_id not in cc_ids:
                log.warning("property row for unknown configuration %r dropped", cc_id)
                continue
            out[cc_id] = dict(row)
        return out


def read_property_table(path: str | Path) -> PropertyTable:
    """Parse delimited text with header `id,<prop1>,<prop2>,...`.

    The delimiter is sniffed from the header (tab, comma, or whitespace).
    Empty cells mark absent values; non-finite values are rejected.
    """
    text = Path(path).read_text()
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise InputError(f"property table {path} is empty")
    header = lines[0]
    delim = "\t" if "\t" in header else ("," if "," in header else None)
    split = (lambda s: s.split(delim)) if delim else str.split
    columns = [c.strip() for c in split(header)]
    if len(columns) < 2:
        raise InputError("property table needs an id column plus one property")
    names = tuple(columns[1:])
    rows: dict[str, dict[str, float]] = {}
    for line_no, line in enumerate(lines[1:], start=2):
        cells = [c.strip() for c in split(line)]
        cc_id = cells[0]
        row: dict[str, float] = {}
        for name, cell in zip(names, cells[1:]):
            if cell == "":
                continue
            try:
                value = float(cell)
            except ValueError:
                raise InputError(
                    f"property table line {line_no}: bad value {cell!r} for {name}"
                ) from None
            if not np.isfinite(value):
                raise InputError(
                    f"property table line {line_no}: non-finite value for {name}"
                )
            row[name] = value
        rows[cc_id] = row
    return PropertyTable(rows, names)


@dataclass(frozen=True, eq=False)
class ProteinTemplate:
    """Per-protein structure shared by every configuration: residue list and
    atom metadata are ensemble-wide invariants, only coordinates vary."""

    name: str
    chain_id: str
    color_index: int
    residue_seqs: tuple[int, ...]
    residue_names: tuple[str, ...]
    atom_elements: tuple[str, ...]
    atom_residue_index: np.ndarray  # (n_atoms,) index into residue arrays
    atom_serials: tuple[int, ...]

    @property
    def n_atoms(self) -> int:
        return len(self.atom_elements)

    @property
    def n_residues(self) -> int:
        return len(self.residue_seqs)

    @cached_property
    def heavy_mask(self) -> np.ndarray:
        return np.array([e not in ("H", "D") for e in self.atom_elements])

    @cached_property
    def all_heavy(self) -> bool:
        return bool(self.heavy_mask.all())

    def residue_hydrophobicity(self, index: int) -> float:
        return hydrophobicity(self.residue_names[index])

    def residue_charge(self, index: int) -> str:
        return charge_class(self.residue_names[index])

    def signature(self) -> tuple:
        """Identity used for the ensemble integrity check."""
        return (
            self.residue_seqs,
            self.residue_names,
            self.atom_elements,
            tuple(self.atom_residue_index.tolist()),
        )


@dataclass
class RawConfiguration:
    id: str
    coords: dict[str, np.ndarray]  # protein name -> (n_atoms, 3) float64
    properties: dict[str, float] = field(default_factory=dict)


@dataclass
class RawEnsemble:
    proteins: dict[str, ProteinTemplate]  # mapping order preserved
    configurations: list[RawConfiguration]  # sorted by id

    @property
    def cc_ids(self) -> list[str]:
        return [cc.id for cc in self.configurations]


@dataclass
class ReferenceStructure:
    """A configuration loaded from outside the ensemble (e.g. a crystal
    structure), possibly covering only a subset of the proteins."""

    proteins: dict[str, ProteinTemplate]
    coords: dict[str, np.ndarray]


def natural_id_sort(ids: list[str]) -> list[str]:
    """Numeric sort when every id is an integer literal, else lexicographic."""
    try:
        return sorted(ids, key=lambda s: (0, int(s)))
    except ValueError:
        return sorted(ids)


def _template_from_atoms(
    name: str, chain_id: str, color: int, atoms: list[Atom]
) -> tuple[ProteinTemplate, np.ndarray]:
    residue_seqs: list[int] = []
    residue_names: list[str] = []
    atom_residue: list[int] = []
    seen: dict[int, int] = {}
    for atom in atoms:
        idx = seen.get(atom.residue_seq)
        if idx is None:
            idx = len(residue_seqs)
            seen[atom.residue_seq] = idx
            residue_seqs.append(atom.residue_seq)
            residue_names.append(atom.residue_name)
        atom_residue.append(idx)
    template = ProteinTemplate(
        name=name,
        chain_id=chain_id,
        color_index=color,
        residue_seqs=tuple(residue_seqs),
        residue_names=tuple(residue_names),
        atom_elements=tuple(a.element for a in atoms),
        atom_residue_index=np.array(atom_residue, dtype=np.intp),
        atom_serials=tuple(a.serial for a in atoms),
    )
    coords = np.array([a.position for a in atoms], dtype=np.float64)
    return template, coords


def _split_chains(atoms: list[Atom]) -> dict[str, list[Atom]]:
    chains: dict[str, list[Atom]] = {}
    for atom in atoms:
        chains.setdefault(atom.chain_id, []).append(atom)
    return chains


def _structure_sources(
    input_path: str | Path,
    include_hetatm: bool,
    include_hydrogens: bool,
    threads: int = 1,
) -> list[tuple[str, list[Atom], str]]:
    """Yield (configuration id, atoms, origin label) for every configuration."""
    path = Path(input_path)
    if path.is_dir():
        files = sorted(
            p for p in path.iterdir() if p.is_file() and not p.name.startswith(".")
        )
        if not files:
            raise InputError(f"no structure files in directory {path}")

        def parse_one(p: Path):
            models = parse_structure_file(
                p.read_bytes(), include_hetatm, include_hydrogens
            )
            if len(models) != 1:
                raise InputError(
                    f"{p.name}: {len(models)} models in a directory-mode file; "
                    "one configuration per file expected"
                )
            return (p.stem, models[0][1], p.name)

        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                return list(pool.map(parse_one, files))
        return [parse_one(p) for p in files]

    if not path.is_file():
        raise InputError(f"input path {path} does not exist")
    models = parse_structure_file(path.read_bytes(), include_hetatm, include_hydrogens)
    return [(str(mid), atoms, f"{path.name} model {mid}") for mid, atoms in models]


def load_ensemble(
    input_path: str | Path,
    mapping: ChainMapping,
    properties: PropertyTable | None = None,
    include_hetatm: bool = False,
    include_hydrogens: bool = False,
    threads: int = 1,
) -> RawEnsemble:
    """Load every configuration, check ensemble integrity, join properties.

    Every configuration must contain every mapped chain, and each protein's
    residue and atom lists must be identical across configurations (only
    coordinates may differ); the contact hierarchy and superposition both
    rely on this.
    """
    sources = _structure_sources(input_path, include_hetatm, include_hydrogens, threads)
    ids = [cc_id for cc_id, _, _ in sources]
    if len(set(ids)) != len(ids):
        raise InputError("duplicate configuration ids in input")

    chain_to_protein = mapping.chain_to_protein
    proteins: dict[str, ProteinTemplate] = {}
    signatures: dict[str, tuple] = {}
    configurations: list[RawConfiguration] = []

    for cc_id, atoms, origin in sources:
        chains = _split_chains(atoms)
        coords: dict[str, np.ndarray] = {}
        for chain_id, protein_name, color in mapping.entries:
            if chain_id not in chains or not chains[chain_id]:
                raise MappingError(
                    f"chain {chain_id!r} (protein {protein_name}) missing in {origin}"
                )
            template, xyz = _template_from_atoms(
                protein_name, chain_id, color, chains[chain_id]
            )
            if protein_name not in proteins:
                proteins[protein_name] = template
                signatures[protein_name] = template.signature()
            elif template.signature() != signatures[protein_name]:
                raise IntegrityError(
                    f"protein {protein_name}: residue/atom list in {origin} differs "
                    "from the first configuration"
                )
            coords[protein_name] = xyz
        configurations.append(RawConfiguration(id=cc_id, coords=coords))

    order = {cc_id: i for i, cc_id in enumerate(natural_id_sort(ids))}
    configurations.sort(key=lambda cc: order[cc.id])

    if properties is not None:
        joined = properties.join(set(ids))
        for cc in configurations:
            cc.properties = joined.get(cc.id, {})

    return RawEnsemble(proteins=proteins, configurations=configurations)


def load_reference_configuration(
    input_path: str | Path,
    mapping: ChainMapping,
    ensemble_proteins: set[str] | None = None,
    include_hetatm: bool = False,
    include_hydrogens: bool = False,
) -> ReferenceStructure:
    """Load a configuration outside the ensemble (first model of the file).

    Chains absent from the file are allowed (the reference may be a
    partially resolved model), but at least one mapped chain must be
    present, and the mapped proteins must exist in the ensemble when
    `ensemble_proteins` is given.
    """
    models = parse_structure_file(
        Path(input_path).read_bytes(), include_hetatm, include_hydrogens
    )
    atoms = models[0][1]
    chains = _split_chains(atoms)
    proteins: dict[str, ProteinTemplate] = {}
    coords: dict[str, np.ndarray] = {}
    for chain_id, protein_name, color in mapping.entries:
        if chain_id not in chains or not chains[chain_id]:
            continue
        if ensemble_proteins is not None and protein_name not in ensemble_proteins:
            raise MappingError(
                f"reference protein {protein_name!r} is not part of the ensemble"
            )
        template, xyz = _template_from_atoms(
            protein_name, chain_id, color, chains[chain_id]
        )
        proteins[protein_name] = template
        coords[protein_name] = xyz
    if not proteins:
        raise MappingError("no mappable chains in reference structure")
    return ReferenceStructure(proteins=proteins, coords=coords)
