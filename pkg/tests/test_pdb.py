import numpy as np
import pytest

from dockdrill.errors import EmptyStructureError, ParseError
from dockdrill.pdb import Atom, format_structure, parse_structure_file


def atom_line(serial, name, resname, chain, seq, x, y, z, element):
    return (
        f"ATOM  {serial:>5d} {name:<4s} {resname:>3s} {chain}{seq:>4d}    "
        f"{x:8.3f}{y:8.3f}{z:8.3f}  1.00  0.00          {element:>2s}"
    )


SINGLE_CHAIN = "\n".join(
    [
        atom_line(1, "N", "ALA", "A", 1, 1.0, 2.0, 3.0, "N"),
        atom_line(2, "CA", "ALA", "A", 1, 2.0, 2.5, 3.5, "C"),
        atom_line(3, "CB", "ALA", "A", 2, -1.75, 0.0, 10.125, "C"),
        "END",
    ]
)


def test_single_chain_three_atoms():
    models = parse_structure_file(SINGLE_CHAIN)
    assert len(models) == 1
    model_id, atoms = models[0]
    assert model_id == 1
    assert len(atoms) == 3
    assert all(a.chain_id == "A" for a in atoms)
    assert atoms[0].position == (1.0, 2.0, 3.0)
    assert atoms[2].residue_seq == 2
    assert atoms[2].element == "C"


def test_multi_model_blocks():
    blocks = []
    for m in (1, 2):
        blocks.append(f"MODEL     {m:>4d}")
        for i in range(5):
            blocks.append(atom_line(i + 1, "CA", "GLY", "B", i + 1, i, 0.0, 0.0, "C"))
        blocks.append("ENDMDL")
    models = parse_structure_file("\n".join(blocks))
    assert [(mid, len(atoms)) for mid, atoms in models] == [(1, 5), (2, 5)]


def test_malformed_x_coordinate_reports_line():
    bad = SINGLE_CHAIN.splitlines()
    bad[1] = bad[1][:30] + "   abc  " + bad[1][38:]
    with pytest.raises(ParseError) as err:
        parse_structure_file("\n".join(bad))
    assert err.value.line_number == 2
    assert "x-coordinate" in str(err.value)


def test_empty_structure_error():
    with pytest.raises(EmptyStructureError):
        parse_structure_file("HEADER only text\nEND\n")


def test_hydrogens_and_hetatm_excluded_by_default():
    text = "\n".join(
        [
            atom_line(1, "CA", "ALA", "A", 1, 0, 0, 0, "C"),
            atom_line(2, "H", "ALA", "A", 1, 0.5, 0, 0, "H"),
            "HETATM" + atom_line(3, "O", "HOH", "A", 90, 5, 5, 5, "O")[6:],
        ]
    )
    (_, atoms), = parse_structure_file(text)
    assert [a.element for a in atoms] == ["C"]
    (_, atoms), = parse_structure_file(text, include_hetatm=True, include_hydrogens=True)
    assert [a.element for a in atoms] == ["C", "H", "O"]


def test_element_guessed_from_name_when_column_blank():
    line = atom_line(1, "CA", "ALA", "A", 1, 0, 0, 0, "C")[:76]
    (_, atoms), = parse_structure_file(line)
    assert atoms[0].element == "C"


def test_round_trip_preserves_coordinates_to_3_decimals():
    rng = np.random.default_rng(3)
    atoms = [
        Atom(
            serial=i + 1,
            element="C",
            position=tuple(np.round(rng.uniform(-999, 999, 3), 3)),
            residue_seq=i + 1,
            residue_name="LEU",
            chain_id="A",
        )
        for i in range(20)
    ]
    text = format_structure([(1, atoms)])
    (_, parsed), = parse_structure_file(text)
    for original, reparsed in zip(atoms, parsed):
        assert reparsed.position == pytest.approx(original.position, abs=5e-4)
        assert reparsed.residue_seq == original.residue_seq
    # a second round trip is exact: the format is the fixed point
    again = format_structure([(1, parsed)])
    assert again == text
