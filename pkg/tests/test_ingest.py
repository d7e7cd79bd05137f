import numpy as np
import pytest

from dockdrill.errors import InputError, IntegrityError, MappingError
from dockdrill.ingest import (
    ChainMapping,
    load_ensemble,
    load_reference_configuration,
    natural_id_sort,
    read_mapping_file,
    read_property_table,
)
from dockdrill.synthetic import case_shaped_ensemble, random_ensemble, write_ensemble_files


@pytest.fixture(scope="module")
def small_files(tmp_path_factory):
    raw = random_ensemble(n_proteins=3, n_ccs=8, n_residues=6, atoms_per_residue=2, seed=1)
    paths = write_ensemble_files(raw, tmp_path_factory.mktemp("ens"))
    return raw, paths


def test_directory_load_round_trips_ids_and_coords(small_files):
    raw, paths = small_files
    mapping = read_mapping_file(paths["mapping"])
    loaded = load_ensemble(paths["input"], mapping)
    assert loaded.cc_ids == [cc.id for cc in raw.configurations]
    assert list(loaded.proteins) == list(raw.proteins)
    for cc, orig in zip(loaded.configurations, raw.configurations):
        for name in loaded.proteins:
            assert np.allclose(cc.coords[name], orig.coords[name], atol=5e-4)


def test_reload_is_stable(small_files):
    _, paths = small_files
    mapping = read_mapping_file(paths["mapping"])
    first = load_ensemble(paths["input"], mapping)
    second = load_ensemble(paths["input"], mapping)
    assert first.cc_ids == second.cc_ids


def test_missing_chain_names_file_and_chain(small_files, tmp_path):
    _, paths = small_files
    mapping = read_mapping_file(paths["mapping"])
    entries = list(mapping.entries) + [("Z", "ghost", 7)]
    with pytest.raises(MappingError) as err:
        load_ensemble(paths["input"], ChainMapping(tuple(entries)))
    assert "Z" in str(err.value) and ".pdb" in str(err.value)


def test_residue_mismatch_is_integrity_error(small_files, tmp_path):
    _, paths = small_files
    import shutil

    broken_dir = tmp_path / "broken"
    shutil.copytree(paths["input"], broken_dir)
    victim = sorted(broken_dir.iterdir())[1]
    text = victim.read_text().splitlines()
    # change a residue number in the second configuration only
    line = text[0]
    text[0] = line[:22] + f"{9999:>4d}" + line[26:]
    victim.write_text("\n".join(text))
    with pytest.raises(IntegrityError):
        load_ensemble(broken_dir, read_mapping_file(paths["mapping"]))


def test_property_join_and_unknown_row_dropped(small_files, tmp_path, caplog):
    raw, paths = small_files
    table = tmp_path / "props.csv"
    lines = ["id,score,energy"]
    for i, cc in enumerate(raw.configurations):
        lines.append(f"{cc.id},{i * 1.5},{-i}")
    lines.append("nonexistent,1.0,2.0")
    table.write_text("\n".join(lines))
    props = read_property_table(table)
    with caplog.at_level("WARNING"):
        loaded = load_ensemble(paths["input"], read_mapping_file(paths["mapping"]), props)
    assert "nonexistent" in caplog.text
    assert loaded.configurations[2].properties == {"score": 3.0, "energy": -2.0}


def test_property_table_missing_cells_absent(tmp_path):
    table = tmp_path / "p.csv"
    table.write_text("id,a,b\nx,1.0,\ny,,2.0\n")
    props = read_property_table(table)
    assert props.rows["x"] == {"a": 1.0}
    assert props.rows["y"] == {"b": 2.0}


def test_property_table_non_finite_rejected(tmp_path):
    table = tmp_path / "p.csv"
    table.write_text("id,a\nx,inf\n")
    with pytest.raises(InputError):
        read_property_table(table)


def test_mapping_validation():
    with pytest.raises(MappingError):
        ChainMapping((("A", "p1", 0), ("A", "p2", 1)))
    with pytest.raises(MappingError):
        ChainMapping((("A", "p1", 0), ("B", "p1", 1)))
    with pytest.raises(MappingError):
        ChainMapping((("A", "p1", 0), ("B", "p2", 0)))
    with pytest.raises(MappingError):
        ChainMapping((("A", "p1", 55),))


def test_natural_id_sort():
    assert natural_id_sort(["10", "2", "1"]) == ["1", "2", "10"]
    assert natural_id_sort(["b", "a", "10"]) == ["10", "a", "b"]


def test_reference_partial_and_unmappable(small_files, tmp_path):
    raw, paths = small_files
    mapping = read_mapping_file(paths["mapping"])
    files = sorted(paths["input"].iterdir())

    # full reference: all chains map
    ref = load_reference_configuration(files[0], mapping, set(raw.proteins))
    assert set(ref.proteins) == set(raw.proteins)

    # partial reference: drop one chain from the file
    partial = tmp_path / "partial.pdb"
    keep = [ln for ln in files[0].read_text().splitlines() if len(ln) < 22 or ln[21] != "C"]
    partial.write_text("\n".join(keep))
    ref = load_reference_configuration(partial, mapping, set(raw.proteins))
    assert len(ref.proteins) == len(raw.proteins) - 1

    # unmappable chains only
    with pytest.raises(MappingError):
        load_reference_configuration(
            files[0], ChainMapping((("Z", "ghost", 0),)), set(raw.proteins)
        )


def test_case_shaped_files_round_trip(tmp_path):
    raw, info = case_shaped_ensemble(seed=3)
    paths = write_ensemble_files(raw, tmp_path)
    loaded = load_ensemble(paths["input"], read_mapping_file(paths["mapping"]))
    assert len(loaded.configurations) == 200
    assert [t.name for t in loaded.proteins.values()] == ["A", "B", "C"]
