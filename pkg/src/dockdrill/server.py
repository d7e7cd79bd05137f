"""Session-scoped HTTP API over the drilldown engine.

All state lives in named sessions; every response carries the generation
it reflects, mutations return the new generation plus the filter list, and
readers see atomic snapshots. Large artifacts (meshes, grids) are served
from separate binary/text endpoints instead of being inlined in JSON.
"""

from __future__ import annotations

import threading
import uuid
from typing import Any

from fastapi import FastAPI, Query, Request, Response
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import __version__
from .errors import DockdrillError, InputError, UnknownEntityError
from .exports import density_dx_text, mesh_payload, stl_bytes
from .scripting import run_script, script_from_queue
from .session import Session, subject_from_json

__all__ = ["create_app"]

_400_CODES = (
    "parse_error",
    "empty_structure",
    "mapping_error",
    "integrity_error",
    "input_error",
)


class LoadRequest(BaseModel):
    input: str = Field(description="directory of structure files or one multi-model file")
    mapping: str | None = Field(default=None, description="path to a chain,protein mapping file")
    mapping_entries: list[list[Any]] | None = Field(
        default=None, description="inline mapping rows [chain, protein] or [chain, protein, color]"
    )
    properties: str | None = None
    cutoff: float = 5.0
    include_hetatm: bool = False
    include_hydrogens: bool = False
    threads: int = 1


class ReferenceRequest(BaseModel):
    input: str
    mapping: str | None = None
    mapping_entries: list[list[Any]] | None = None


class FilterRequest(BaseModel):
    kind: str
    subject: dict


class FilterPatch(BaseModel):
    enabled: bool | None = None
    min: float | None = None
    max: float | None = None


class SelectionRequest(BaseModel):
    cc_ids: list[str] = Field(default_factory=list)
    ppe_pairs: list[list[str]] = Field(default_factory=list)
    ppc_ids: list[list[Any]] = Field(default_factory=list)
    aap_keys: list[list[list[Any]]] = Field(default_factory=list)
    aa_ids: list[list[Any]] = Field(default_factory=list)


class PropagateRequest(BaseModel):
    down: bool = False


class PrimaryRequest(BaseModel):
    protein: str | None = None
    ppe: list[str] | None = None
    cc: str | None = None
    ppc: list[Any] | None = None  # [[p, q], cc]


class ScriptRequest(BaseModel):
    script: str


def _mapping_arg(path: str | None, entries: list[list[Any]] | None):
    from .ingest import ChainMapping

    if entries is not None:
        pairs = []
        explicit = []
        for row in entries:
            if len(row) == 2:
                pairs.append((str(row[0]), str(row[1])))
            elif len(row) == 3:
                explicit.append((str(row[0]), str(row[1]), int(row[2])))
            else:
                raise InputError(f"bad mapping entry {row!r}")
        if explicit and pairs:
            raise InputError("mix of 2- and 3-column mapping entries")
        return (
            ChainMapping(tuple(explicit))
            if explicit
            else ChainMapping.from_pairs(pairs)
        )
    if path is None:
        raise InputError("mapping file path or inline mapping entries required")
    return path


def create_app() -> FastAPI:
    app = FastAPI(title="dockdrill", version=__version__)
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()

    def get_session(session_id: str) -> Session:
        session = sessions.get(session_id)
        if session is None:
            raise UnknownEntityError(f"unknown session {session_id!r}")
        return session

    @app.exception_handler(DockdrillError)
    async def on_error(_: Request, exc: DockdrillError):
        status = 400 if exc.code in _400_CODES else (404 if exc.code == "unknown_entity" else 500)
        return JSONResponse(status_code=status, content={"error": exc.payload()})

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.post("/sessions")
    def create_session(body: LoadRequest | None = None):
        session = Session(uuid.uuid4().hex[:12])
        with registry_lock:
            sessions[session.id] = session
        if body is not None:
            _load(session, body)
        return _session_summary(session)

    def _load(session: Session, body: LoadRequest):
        session.load(
            body.input,
            _mapping_arg(body.mapping, body.mapping_entries),
            properties=body.properties,
            cutoff=body.cutoff,
            include_hetatm=body.include_hetatm,
            include_hydrogens=body.include_hydrogens,
            threads=body.threads,
        )

    def _session_summary(session: Session) -> dict:
        if session.ensemble is None:
            return {"session": session.id, "generation": session.generation, "cc_count": 0}
        return session.summary_payload()

    @app.post("/sessions/{session_id}/load")
    def load_ensemble_endpoint(session_id: str, body: LoadRequest):
        session = get_session(session_id)
        _load(session, body)
        return session.summary_payload()

    @app.post("/sessions/{session_id}/reference")
    def load_reference_endpoint(session_id: str, body: ReferenceRequest):
        session = get_session(session_id)
        session.load_reference(body.input, _mapping_arg(body.mapping, body.mapping_entries))
        return session.summary_payload()

    @app.get("/sessions/{session_id}")
    def summary(session_id: str):
        return _session_summary(get_session(session_id))

    @app.delete("/sessions/{session_id}")
    def delete_session(session_id: str):
        with registry_lock:
            sessions.pop(session_id, None)
        return {"deleted": session_id}

    # -- view payloads ----------------------------------------------------

    @app.get("/sessions/{session_id}/overview")
    def overview(session_id: str, scaling: str = "independent", generation: int | None = None):
        payload = get_session(session_id).overview_payload(scaling=scaling)
        return _with_staleness(payload, generation)

    @app.get("/sessions/{session_id}/properties")
    def properties(session_id: str, generation: int | None = None):
        return _with_staleness(get_session(session_id).properties_payload(), generation)

    @app.get("/sessions/{session_id}/protein-view")
    def protein_view(
        session_id: str,
        primary: str | None = None,
        condensed: bool = False,
        generation: int | None = None,
    ):
        payload = get_session(session_id).protein_view_payload(primary, condensed)
        return _with_staleness(payload, generation)

    @app.get("/sessions/{session_id}/residue-matrix")
    def residue_matrix(
        session_id: str,
        p: str | None = None,
        q: str | None = None,
        sort: str = "sequence",
        generation: int | None = None,
    ):
        pair = (p, q) if p and q else None
        payload = get_session(session_id).residue_matrix_payload(pair, sort=sort)
        return _with_staleness(payload, generation)

    @app.get("/sessions/{session_id}/contact-lists")
    def contact_lists(
        session_id: str,
        ccs: str = Query(description="comma-separated configuration ids"),
        p: str | None = None,
        q: str | None = None,
        generation: int | None = None,
    ):
        pair = (p, q) if p and q else None
        cc_list = [c for c in ccs.split(",") if c]
        payload = get_session(session_id).contact_lists_payload(cc_list, pair)
        return _with_staleness(payload, generation)

    @app.get("/sessions/{session_id}/aggregates")
    def aggregates(session_id: str, generation: int | None = None):
        return _with_staleness(get_session(session_id).aggregates_payload(), generation)

    @app.get("/sessions/{session_id}/similarity")
    def similarity(session_id: str, generation: int | None = None):
        return _with_staleness(get_session(session_id).similarity_payload(), generation)

    @app.get("/sessions/{session_id}/density-mesh")
    def density(
        session_id: str,
        primary: str | None = None,
        iso: float = 0.10,
        spacing: float = 1.0,
        generation: int | None = None,
    ):
        payload = get_session(session_id).density_payload(
            primary=primary, iso_fraction=iso, spacing=spacing
        )
        return _with_staleness(payload, generation)

    @app.get("/sessions/{session_id}/density-mesh/{protein}.json")
    def density_mesh_json(
        session_id: str, protein: str, iso: float = 0.10, spacing: float = 1.0
    ):
        mesh = get_session(session_id).density_mesh(protein, iso, spacing)
        return mesh_payload(mesh)

    @app.get("/sessions/{session_id}/density-mesh/{protein}.stl")
    def density_mesh_stl(
        session_id: str, protein: str, iso: float = 0.10, spacing: float = 1.0
    ):
        mesh = get_session(session_id).density_mesh(protein, iso, spacing)
        return Response(content=stl_bytes(mesh, label=protein), media_type="model/stl")

    @app.get("/sessions/{session_id}/density-grid/{protein}.dx")
    def density_grid(session_id: str, protein: str, spacing: float = 1.0):
        field = get_session(session_id).density_field(protein, spacing)
        return Response(content=density_dx_text(field), media_type="text/plain")

    @app.get("/sessions/{session_id}/cc/{cc_id}")
    def cc_coordinates(session_id: str, cc_id: str, generation: int | None = None):
        payload = get_session(session_id).cc_coordinates_payload(cc_id)
        return _with_staleness(payload, generation)

    @app.get("/sessions/{session_id}/exploded-cc")
    def exploded(
        session_id: str, cc: str, gap: float = 10.0, generation: int | None = None
    ):
        payload = get_session(session_id).exploded_payload(cc, gap=gap)
        return _with_staleness(payload, generation)

    # -- filters, selection, primaries -------------------------------------

    @app.get("/sessions/{session_id}/filters")
    def filters_list(session_id: str, generation: int | None = None):
        return _with_staleness(get_session(session_id).filters_payload(), generation)

    @app.get("/sessions/{session_id}/filters/script")
    def filters_script(session_id: str):
        session = get_session(session_id)
        session.snapshot()
        return Response(
            content=script_from_queue(session.queue), media_type="text/plain"
        )

    @app.post("/sessions/{session_id}/filters/script")
    def filters_run_script(session_id: str, body: ScriptRequest):
        session = get_session(session_id)
        run_script(session, body.script)
        return session.filters_payload()

    @app.post("/sessions/{session_id}/filters")
    def filters_add(session_id: str, body: FilterRequest):
        session = get_session(session_id)
        subject = subject_from_json(body.subject)
        session.add_filter(body.kind, subject)
        return session.filters_payload()

    @app.patch("/sessions/{session_id}/filters/{filter_id}")
    def filters_patch(session_id: str, filter_id: int, body: FilterPatch):
        session = get_session(session_id)
        if body.min is not None or body.max is not None:
            record = session.queue.get(filter_id) if session.queue else None
            lo = body.min if body.min is not None else (record.subject.lo if record else None)
            hi = body.max if body.max is not None else (record.subject.hi if record else None)
            session.set_range(filter_id, lo, hi)
        if body.enabled is not None:
            session.set_filter_enabled(filter_id, body.enabled)
        return session.filters_payload()

    @app.delete("/sessions/{session_id}/filters/{filter_id}")
    def filters_delete(session_id: str, filter_id: int):
        session = get_session(session_id)
        session.delete_filter(filter_id)
        return session.filters_payload()

    @app.delete("/sessions/{session_id}/filters")
    def filters_clear(session_id: str):
        session = get_session(session_id)
        session.clear_filters()
        return session.filters_payload()

    @app.get("/sessions/{session_id}/selection")
    def selection_get(session_id: str):
        return get_session(session_id).selection_payload()

    @app.post("/sessions/{session_id}/selection")
    def selection_set(session_id: str, body: SelectionRequest):
        from .hierarchy import aap_key, pair_key

        session = get_session(session_id)
        session.set_selection(
            cc_ids=[str(c) for c in body.cc_ids],
            ppe_pairs=[pair_key(str(p), str(q)) for p, q in body.ppe_pairs],
            ppc_ids=[
                (pair_key(str(pq[0]), str(pq[1])), str(cc)) for pq, cc in body.ppc_ids
            ],
            aap_keys=[
                aap_key((str(a[0]), int(a[1])), (str(b[0]), int(b[1])))
                for a, b in body.aap_keys
            ],
            aa_ids=[(str(p), int(s)) for p, s in body.aa_ids],
        )
        return session.selection_payload()

    @app.post("/sessions/{session_id}/selection/propagate")
    def selection_propagate(session_id: str, body: PropagateRequest):
        session = get_session(session_id)
        session.propagate(down=body.down)
        return session.selection_payload()

    @app.post("/sessions/{session_id}/primary")
    def primary_set(session_id: str, body: PrimaryRequest):
        session = get_session(session_id)
        session.set_primary(
            protein=body.protein,
            ppe=tuple(body.ppe) if body.ppe else None,
            cc=body.cc,
            ppc=((body.ppc[0][0], body.ppc[0][1]), body.ppc[1]) if body.ppc else None,
        )
        return session.summary_payload()

    return app


def _with_staleness(payload: dict, requested_generation: int | None) -> dict:
    if requested_generation is not None and requested_generation != payload.get("generation"):
        payload["stale_request"] = True
    return payload
