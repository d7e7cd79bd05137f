"""Fixed-column coordinate file parsing and writing (PDB ATOM/HETATM records).

Only the record types needed for ensemble ingestion are handled: ATOM,
HETATM, MODEL, ENDMDL. Everything else is skipped. Multi-model files yield
one atom list per model; files without MODEL records yield a single
implicit model with id 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import VDW_RADII, is_standard_residue
from .errors import EmptyStructureError, ParseError

__all__ = ["Atom", "parse_structure_file", "format_structure"]


@dataclass(frozen=True)
class Atom:
    serial: int
    element: str
    position: tuple[float, float, float]
    residue_seq: int
    residue_name: str
    chain_id: str

    @property
    def standard_residue(self) -> bool:
        return is_standard_residue(self.residue_name)


def _guess_element(atom_name: str, residue_name: str) -> str:
    """Derive the element from the atom-name columns when the element field
    is blank. Standard amino-acid atoms are single-letter elements (C, N,
    O, S, H), so the first alphabetic character wins regardless of column
    alignment; for other residues a two-letter name starting in column 13
    (e.g. 'FE', 'ZN') is taken as a two-letter element."""
    alpha = "".join(ch for ch in atom_name.strip() if ch.isalpha())
    if not alpha:
        return ""
    if not is_standard_residue(residue_name) and len(atom_name) >= 2:
        two = atom_name[:2].strip().upper()
        if len(two) == 2 and two in VDW_RADII:
            return two
    return alpha[0].upper()


def _parse_float(line: str, start: int, stop: int, field: str, line_no: int) -> float:
    raw = line[start:stop].strip()
    try:
        value = float(raw)
    except ValueError:
        raise ParseError(
            f"malformed {field} field {raw!r} in coordinate record", line_no
        ) from None
    if not np.isfinite(value):
        raise ParseError(f"non-finite {field} value {raw!r}", line_no)
    return value


def _parse_int(line: str, start: int, stop: int, field: str, line_no: int) -> int:
    raw = line[start:stop].strip()
    try:
        return int(raw)
    except ValueError:
        raise ParseError(
            f"malformed {field} field {raw!r} in coordinate record", line_no
        ) from None


def parse_structure_file(
    content: bytes | str,
    include_hetatm: bool = False,
    include_hydrogens: bool = False,
) -> list[tuple[int, list[Atom]]]:
    """Parse fixed-column coordinate records into (model_id, atoms) blocks.

    HETATM records and hydrogens are excluded by default; docking decoys
    frequently lack hydrogens and contact detection works on heavy atoms.
    Alternate locations other than blank/'A' are skipped.

    Raises ParseError for malformed fields (with line number) and
    EmptyStructureError when no coordinate records are present.
    """
    if isinstance(content, bytes):
        text = content.decode("utf-8", errors="replace")
    else:
        text = content

    models: list[tuple[int, list[Atom]]] = []
    current: list[Atom] = []
    current_model: int | None = None
    saw_record = False
    saw_model_record = False

    def close_model(model_id: int):
        models.append((model_id, current.copy()))
        current.clear()

    for line_no, line in enumerate(text.splitlines(), start=1):
        record = line[0:6].strip()
        if record == "MODEL":
            saw_model_record = True
            if current_model is not None or current:
                # close previous model; atoms before the first MODEL record
                # become an implicit model 0
                close_model(current_model if current_model is not None else 0)
            current_model = _parse_int(line, 6, 14, "model id", line_no)
            continue
        if record == "ENDMDL":
            if current_model is not None:
                close_model(current_model)
                current_model = None
            continue
        if record not in ("ATOM", "HETATM"):
            continue

        saw_record = True
        if record == "HETATM" and not include_hetatm:
            continue
        altloc = line[16:17]
        if altloc not in (" ", "", "A"):
            continue

        name = line[12:16]
        residue_name = line[17:20].strip()
        element = line[76:78].strip().upper() if len(line) >= 78 else ""
        if not element:
            element = _guess_element(name, residue_name)
        if element in ("H", "D") and not include_hydrogens:
            continue

        atom = Atom(
            serial=_parse_int(line, 6, 11, "serial", line_no),
            element=element,
            position=(
                _parse_float(line, 30, 38, "x-coordinate", line_no),
                _parse_float(line, 38, 46, "y-coordinate", line_no),
                _parse_float(line, 46, 54, "z-coordinate", line_no),
            ),
            residue_seq=_parse_int(line, 22, 26, "residue sequence", line_no),
            residue_name=residue_name,
            chain_id=line[21:22] if len(line) > 21 else " ",
        )
        current.append(atom)

    if current_model is not None or (current and saw_model_record):
        close_model(current_model if current_model is not None else 0)
    elif not saw_model_record:
        models.append((1, current.copy()))

    if not saw_record:
        raise EmptyStructureError("no ATOM/HETATM records in input")
    if all(len(atoms) == 0 for _, atoms in models):
        raise EmptyStructureError(
            "every coordinate record was excluded (hydrogens/heteroatoms only)"
        )
    return models


def format_structure(models: list[tuple[int, list[Atom]]]) -> str:
    """Serialize models back to fixed-column records.

    Coordinates keep the format's native %8.3f precision, so a parse ->
    format -> parse round trip reproduces positions to 3 decimals. Atom
    names are regenerated from the element.
    """
    multi = len(models) > 1
    lines: list[str] = []
    for model_id, atoms in models:
        if multi:
            lines.append(f"MODEL     {model_id:>4d}")
        for atom in atoms:
            name = f" {atom.element:<3s}" if len(atom.element) < 2 else f"{atom.element:<4s}"
            x, y, z = atom.position
            lines.append(
                f"ATOM  {atom.serial:>5d} {name:<4.4s} {atom.residue_name:>3.3s} "
                f"{atom.chain_id:1.1s}{atom.residue_seq:>4d}    "
                f"{x:8.3f}{y:8.3f}{z:8.3f}{1.0:6.2f}{0.0:6.2f}          "
                f"{atom.element:>2.2s}"
            )
        if multi:
            lines.append("ENDMDL")
    lines.append("END")
    return "\n".join(lines) + "\n"
