import pytest
from fastapi.testclient import TestClient

from dockdrill.server import create_app
from dockdrill.synthetic import (
    case_shaped_ensemble,
    random_ensemble,
    write_ensemble_files,
)


@pytest.fixture(scope="module")
def case_paths(tmp_path_factory):
    raw, info = case_shaped_ensemble(seed=7)
    paths = write_ensemble_files(raw, tmp_path_factory.mktemp("case"))
    return paths, info


@pytest.fixture()
def client():
    return TestClient(create_app())


def make_session(client, paths):
    response = client.post(
        "/sessions",
        json={"input": str(paths["input"]), "mapping": str(paths["mapping"])},
    )
    assert response.status_code == 200
    return response.json()["session"], response.json()


def test_create_load_and_summary(client, case_paths):
    paths, _ = case_paths
    sid, summary = make_session(client, paths)
    assert summary["cc_count"] == 200
    assert [p["name"] for p in summary["proteins"]] == ["A", "B", "C"]
    assert summary["generation"] == 1

    # reload: generation increments, filters cleared
    client.post(f"/sessions/{sid}/filters", json={
        "kind": "remove", "subject": {"level": "cc", "ids": ["000"]}
    })
    gen_before = client.get(f"/sessions/{sid}").json()["generation"]
    reload = client.post(
        f"/sessions/{sid}/load",
        json={"input": str(paths["input"]), "mapping": str(paths["mapping"])},
    )
    assert reload.json()["generation"] > gen_before
    assert client.get(f"/sessions/{sid}/filters").json()["filters"] == []


def test_load_empty_directory_is_400(client, tmp_path):
    empty = tmp_path / "empty"
    empty.mkdir()
    response = client.post(
        "/sessions", json={"input": str(empty), "mapping_entries": [["A", "a"]]}
    )
    assert response.status_code == 400
    assert response.json()["error"]["code"] == "input_error"


def test_unknown_entities_are_404(client, case_paths):
    paths, _ = case_paths
    sid, _ = make_session(client, paths)
    assert client.get("/sessions/zzz").status_code == 404
    assert (
        client.get(f"/sessions/{sid}/protein-view?primary=nope").status_code == 404
    )
    assert (
        client.get(f"/sessions/{sid}/residue-matrix?p=A&q=nope").status_code == 404
    )
    assert client.get(f"/sessions/{sid}/exploded-cc?cc=nope").status_code == 404
    assert client.delete(f"/sessions/{sid}/filters/12345").status_code == 404


def test_filter_lifecycle_and_status_counts(client, case_paths):
    paths, info = case_paths
    sid, _ = make_session(client, paths)
    aap = info["designated_aap"]
    response = client.post(
        f"/sessions/{sid}/filters",
        json={
            "kind": "remove_complement",
            "subject": {"level": "aap", "keys": [[list(aap[0]), list(aap[1])]]},
        },
    )
    body = response.json()
    assert len(body["filters"]) == 1
    assert body["status"]["cc_visible"] == 35
    assert body["status"]["cc_hidden"] == 165
    assert body["status"]["ppc_total"] >= body["status"]["ppc_visible"]

    fid = body["filters"][0]["id"]
    disabled = client.patch(f"/sessions/{sid}/filters/{fid}", json={"enabled": False})
    assert disabled.json()["status"]["cc_visible"] == 200
    assert disabled.json()["status"]["affected_by_disabled"] == 165

    # affected marks flow into the views
    properties = client.get(f"/sessions/{sid}/properties").json()
    states = {row["state"] for row in properties["configurations"]}
    assert states == {"visible", "affected"}

    client.post(f"/sessions/{sid}/primary", json={"ppe": ["A", "B"]})
    matrix = client.get(f"/sessions/{sid}/residue-matrix").json()
    marks = {cell["mark"] for cell in matrix["cells"]}
    assert "fully_affected" in marks or "partially_affected" in marks

    enabled = client.patch(f"/sessions/{sid}/filters/{fid}", json={"enabled": True})
    assert enabled.json()["status"]["cc_visible"] == 35

    cleared = client.delete(f"/sessions/{sid}/filters")
    assert cleared.json()["status"]["cc_visible"] == 200


def test_generation_strictly_increases(client, case_paths):
    paths, _ = case_paths
    sid, summary = make_session(client, paths)
    generations = [summary["generation"]]
    response = client.post(
        f"/sessions/{sid}/filters",
        json={"kind": "remove", "subject": {"level": "cc", "ids": ["000", "001"]}},
    )
    generations.append(response.json()["generation"])
    response = client.post(f"/sessions/{sid}/primary", json={"protein": "A"})
    generations.append(response.json()["generation"])
    response = client.delete(f"/sessions/{sid}/filters")
    generations.append(response.json()["generation"])
    assert generations == sorted(set(generations))

    stale = client.get(f"/sessions/{sid}/overview?generation=1").json()
    assert stale["stale_request"] is True
    fresh = client.get(f"/sessions/{sid}/overview?generation={generations[-1]}").json()
    assert "stale_request" not in fresh


def test_replay_determinism(client, case_paths):
    paths, info = case_paths
    aap = info["designated_aap"]

    def run():
        sid, _ = make_session(client, paths)
        client.post(f"/sessions/{sid}/primary", json={"protein": "A", "ppe": ["A", "B"]})
        client.post(
            f"/sessions/{sid}/filters",
            json={
                "kind": "remove_complement",
                "subject": {"level": "aap", "keys": [[list(aap[0]), list(aap[1])]]},
            },
        )
        overview = client.get(f"/sessions/{sid}/overview").content
        matrix = client.get(f"/sessions/{sid}/residue-matrix").content
        filters_body = client.get(f"/sessions/{sid}/filters").content
        return overview, matrix, filters_body

    first = run()
    second = run()
    assert first == second


def test_selection_and_propagation(client, case_paths):
    paths, info = case_paths
    sid, _ = make_session(client, paths)
    aap = info["designated_aap"]
    response = client.post(
        f"/sessions/{sid}/selection",
        json={"aap_keys": [[list(aap[0]), list(aap[1])]]},
    )
    assert response.status_code == 200
    assert response.json()["cc_ids"] == []  # propagation is on demand

    up = client.post(f"/sessions/{sid}/selection/propagate", json={"down": False})
    assert sorted(up.json()["cc_ids"]) == sorted(info["aap_ccs"])
    assert up.json()["aap_keys"] == [[list(aap[0]), list(aap[1])]]

    down = client.post(f"/sessions/{sid}/selection/propagate", json={"down": True})
    assert len(down.json()["aap_keys"]) > 1
    again = client.post(f"/sessions/{sid}/selection/propagate", json={"down": True})
    assert down.json()["aap_keys"] == again.json()["aap_keys"]
    assert down.json()["cc_ids"] == again.json()["cc_ids"]


def test_density_and_mesh_endpoints(client, tmp_path):
    raw = random_ensemble(n_proteins=3, n_ccs=4, n_residues=8, atoms_per_residue=3, seed=6, crowding=1.5)
    paths = write_ensemble_files(raw, tmp_path)
    sid, _ = make_session(client, paths)
    client.post(f"/sessions/{sid}/primary", json={"protein": "P0"})
    listing = client.get(f"/sessions/{sid}/density-mesh?iso=0.1&spacing=2.0")
    assert listing.status_code == 200
    channels = listing.json()["channels"]
    assert channels
    name = channels[0]["protein"]
    mesh = client.get(f"/sessions/{sid}/density-mesh/{name}.json?iso=0.1&spacing=2.0")
    body = mesh.json()
    assert body["vertex_count"] * 3 == len(body["vertices"])
    assert body["triangle_count"] * 3 == len(body["triangles"])

    stl = client.get(f"/sessions/{sid}/density-mesh/{name}.stl?iso=0.1&spacing=2.0")
    assert stl.status_code == 200
    assert stl.headers["content-type"].startswith("model/stl")
    import struct

    count = struct.unpack("<I", stl.content[80:84])[0]
    assert count == body["triangle_count"]
    assert len(stl.content) == 84 + 50 * count

    # iso above the maximum: valid empty mesh payload
    empty = client.get(f"/sessions/{sid}/density-mesh/{name}.json?iso=5.0&spacing=2.0")
    assert empty.json()["triangle_count"] == 0

    grid = client.get(f"/sessions/{sid}/density-grid/{name}.dx?spacing=2.0")
    assert grid.status_code == 200
    assert "gridpositions" in grid.text


def test_script_round_trip(client, case_paths):
    paths, info = case_paths
    sid, _ = make_session(client, paths)
    aap = info["designated_aap"]
    script = (
        f"remove_complement aap {aap[0][0]}:{aap[0][1]} {aap[1][0]}:{aap[1][1]}\n"
        f"remove cc 000 001\n"
    )
    response = client.post(f"/sessions/{sid}/filters/script", json={"script": script})
    assert response.status_code == 200
    exported = client.get(f"/sessions/{sid}/filters/script").text
    assert "remove_complement aap A:299 B:222" in exported
    assert "remove cc 000 001" in exported
