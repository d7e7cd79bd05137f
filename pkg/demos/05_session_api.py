"""Drive a full analysis session through the HTTP API (in-process).

The same flow the browser UI uses: create a session from files on disk,
set the primaries, filter from the residue matrix, disable the filter, and
watch the affected marks appear in the view payloads. Start a real server
with `dockdrill serve` and replace TestClient with any HTTP client to do
this over the network.
"""

import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from dockdrill.server import create_app
from dockdrill.synthetic import case_shaped_ensemble, write_ensemble_files

workdir = Path(tempfile.mkdtemp(prefix="dockdrill_demo_"))
raw, info = case_shaped_ensemble(seed=7)
paths = write_ensemble_files(raw, workdir)
print(f"wrote {len(raw.configurations)} structure files under {workdir}")

client = TestClient(create_app())
session = client.post("/sessions", json={
    "input": str(paths["input"]),
    "mapping": str(paths["mapping"]),
}).json()
sid = session["session"]
print(f"session {sid}: {session['cc_count']} configurations, "
      f"proteins {[p['name'] for p in session['proteins']]}")

client.post(f"/sessions/{sid}/primary", json={"protein": "A", "ppe": ["A", "B"]})

aap = info["designated_aap"]
filters = client.post(f"/sessions/{sid}/filters", json={
    "kind": "remove_complement",
    "subject": {"level": "aap", "keys": [[list(aap[0]), list(aap[1])]]},
}).json()
print(f"\nafter the matrix filter: {filters['status']['cc_visible']} of "
      f"{filters['status']['cc_total']} visible")
print(f"filter list: {[f['label'] for f in filters['filters']]}")

fid = filters["filters"][0]["id"]
disabled = client.patch(f"/sessions/{sid}/filters/{fid}", json={"enabled": False}).json()
print(f"\ndisabled -> {disabled['status']['cc_visible']} visible, "
      f"{disabled['status']['affected_by_disabled']} only while it stays off")

properties = client.get(f"/sessions/{sid}/properties").json()
greyed = sum(1 for row in properties["configurations"] if row["state"] == "affected")
print(f"property view: {greyed} points would be drawn greyed out")

matrix = client.get(f"/sessions/{sid}/residue-matrix").json()
crossed = sum(1 for cell in matrix["cells"] if cell["mark"] == "fully_affected")
slashed = sum(1 for cell in matrix["cells"] if cell["mark"] == "partially_affected")
print(f"residue matrix: {crossed} cells with a full cross, {slashed} with a diagonal")

client.patch(f"/sessions/{sid}/filters/{fid}", json={"enabled": True})
script = client.get(f"/sessions/{sid}/filters/script").text
print(f"\nexported filter script (replayable via `dockdrill run --script`):\n{script}")
