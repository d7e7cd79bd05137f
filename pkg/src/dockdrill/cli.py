"""Batch interface: load an ensemble, run a filter script, export reports.

    dockdrill run --input decoys/ --mapping mapping.csv --script drill.txt \
        --export visible:out/visible.txt --export aggregates:out/pairs.csv
    dockdrill bench --proteins 2,4,8 --ccs 100
    dockdrill serve --port 8000

Exit codes: 0 success, 2 input error, 3 script error, 4 internal error.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import sys
import time
from pathlib import Path

from . import __version__
from .errors import DockdrillError, InputError
from .exports import (
    file_sha256,
    provenance_lines,
    write_density_dx,
    write_stl,
)
from .hierarchy import build_hierarchy
from .scripting import run_script, script_from_queue
from .session import Session
from .similarity import SIMILARITY_PROPERTY
from .synthetic import random_ensemble

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_SCRIPT = 3
EXIT_INTERNAL = 4

EXPORT_KINDS = ("visible", "aggregates", "matrix", "similarity", "density", "script")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dockdrill",
        description="Drilldown engine for multi-body protein docking ensembles",
    )
    parser.add_argument("--version", action="version", version=f"dockdrill {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="load an ensemble, apply a filter script, export reports")
    run.add_argument("--input", required=True, help="directory of structure files or one multi-model file")
    run.add_argument("--mapping", required=True, help="chain,protein[,color] mapping file")
    run.add_argument("--properties", help="delimited property table (header id,<p1>,...)")
    run.add_argument("--script", help="filter script file (default: no filters)")
    run.add_argument(
        "--export",
        action="append",
        default=[],
        metavar="KIND:PATH",
        help=f"export artifact; kinds: {', '.join(EXPORT_KINDS)} (repeatable)",
    )
    run.add_argument("--cutoff", type=float, default=5.0, help="contact cutoff in Angstrom")
    run.add_argument("--spacing", type=float, default=1.0, help="density grid spacing in Angstrom")
    run.add_argument("--iso", type=float, default=0.10, help="iso level as fraction of field max")
    run.add_argument("--threads", type=int, default=1)
    run.add_argument("--primary", help="primary protein for density export")
    run.add_argument("--primary-cc", help="primary configuration for similarity export")
    run.add_argument("--include-hydrogens", action="store_true")
    run.add_argument("--include-hetatm", action="store_true")

    bench = sub.add_parser("bench", help="time hierarchy builds over synthetic ensembles")
    bench.add_argument("--proteins", default="2,4,8", help="comma list of protein counts")
    bench.add_argument("--ccs", default="100,200,400", help="comma list of configuration counts")
    bench.add_argument("--residues", type=int, default=24, help="residues per protein")
    bench.add_argument("--atoms-per-residue", type=int, default=4)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--repeat", type=int, default=3, help="repetitions (best time reported)")
    bench.add_argument("--cutoff", type=float, default=5.0)

    serve = sub.add_parser("serve", help="start the session HTTP API")
    serve.add_argument("--host", default=os.environ.get("DOCKDRILL_HOST", "127.0.0.1"))
    serve.add_argument(
        "--port", type=int, default=int(os.environ.get("DOCKDRILL_PORT", "8000"))
    )
    serve.add_argument(
        "--workers", type=int, default=int(os.environ.get("DOCKDRILL_WORKERS", "1"))
    )
    return parser


def _parse_exports(specs: list[str]) -> list[tuple[str, Path]]:
    out = []
    for spec in specs:
        kind, sep, path = spec.partition(":")
        if not sep or kind not in EXPORT_KINDS or not path:
            raise InputError(
                f"bad --export {spec!r}; expected KIND:PATH with kind in {EXPORT_KINDS}"
            )
        out.append((kind, Path(path)))
    return out


def _provenance(args, script_text: str | None) -> list[str]:
    inputs = {"input": str(args.input)}
    for label in ("mapping", "properties", "script"):
        value = getattr(args, label, None)
        if value:
            inputs[f"{label}_sha256"] = file_sha256(value)
    if script_text is not None:
        inputs["script_hash"] = hashlib.sha256(script_text.encode()).hexdigest()
    inputs["cutoff"] = str(args.cutoff)
    return provenance_lines(inputs)


def _write_text(path: Path, header: list[str], body: list[str]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(header + body) + "\n")


def cmd_run(args) -> int:
    exports = _parse_exports(args.export)
    session = Session("cli")
    session.load(
        args.input,
        args.mapping,
        properties=args.properties,
        cutoff=args.cutoff,
        include_hetatm=args.include_hetatm,
        include_hydrogens=args.include_hydrogens,
        threads=args.threads,
    )
    if args.primary:
        session.set_primary(protein=args.primary)
    if args.primary_cc:
        session.set_primary(cc=args.primary_cc)

    script_text = None
    if args.script:
        script_text = Path(args.script).read_text()
        try:
            run_script(session, script_text)
        except DockdrillError as exc:
            print(f"script error: {exc.message}", file=sys.stderr)
            return EXIT_SCRIPT

    header = _provenance(args, script_text)
    snap = session.snapshot()
    ensemble = session.ensemble
    status = session.filters_payload()["status"]
    print(
        f"{status['cc_visible']} of {status['cc_total']} configurations visible "
        f"({status['cc_hidden']} filtered out; "
        f"{status['ppc_visible']}/{status['ppc_total']} pair interfaces)"
    )

    for kind, path in exports:
        if kind == "visible":
            ids = ensemble.sorted_cc_ids(snap.visibility.visible)
            _write_text(path, header, ids)
        elif kind == "aggregates":
            rows = ["pair_a,pair_b,n_ppcs,n_unique_aap,consistency"]
            for entry in session.aggregates_payload()["pairs"]:
                consistency = "" if entry["consistency"] is None else f"{entry['consistency']:.12g}"
                rows.append(
                    f"{entry['pair'][0]},{entry['pair'][1]},{entry['n_ppcs']},"
                    f"{entry['n_unique_aap']},{consistency}"
                )
            _write_text(path, header, rows)
        elif kind == "matrix":
            path.mkdir(parents=True, exist_ok=True)
            for pair in sorted(ensemble.ppes):
                payload = session.residue_matrix_payload(pair)
                rows = ["row_protein,row_seq,col_protein,col_seq,count"]
                for cell in payload["cells"]:
                    rows.append(
                        f"{pair[0]},{cell['row_seq']},{pair[1]},{cell['col_seq']},{cell['count']}"
                    )
                _write_text(path / f"matrix_{pair[0]}_{pair[1]}.csv", header, rows)
        elif kind == "similarity":
            payload = session.similarity_payload()
            if not payload["scores"]:
                raise InputError(
                    "similarity export needs a primary configuration "
                    "(--primary-cc or a primary_cc script statement)"
                )
            rows = [f"cc,{SIMILARITY_PROPERTY}"] + [
                f"{row['cc']},{row['similarity']:.12g}" for row in payload["scores"]
            ]
            _write_text(path, header, rows)
        elif kind == "density":
            if not (args.primary or session.selection.primary_protein):
                raise InputError("density export needs --primary")
            path.mkdir(parents=True, exist_ok=True)
            info = session.density_payload(
                primary=args.primary, iso_fraction=args.iso, spacing=args.spacing
            )
            for channel in info["channels"]:
                name = channel["protein"]
                mesh = session.density_mesh(name, args.iso, args.spacing)
                write_stl(mesh, path / f"density_{name}.stl", label=name)
                write_density_dx(
                    session.density_field(name, args.spacing),
                    path / f"density_{name}.dx",
                    comments=header,
                )
        elif kind == "script":
            _write_text(path, header, [script_from_queue(session.queue).rstrip("\n")])
    return EXIT_OK


def cmd_bench(args) -> int:
    protein_counts = [int(v) for v in str(args.proteins).split(",") if v]
    cc_counts = [int(v) for v in str(args.ccs).split(",") if v]
    print(f"{'proteins':>8} {'ccs':>6} {'build_s':>12} {'ppcs':>8} {'aaps':>8}")
    for m in protein_counts:
        for n in cc_counts:
            raw = random_ensemble(
                n_proteins=m,
                n_ccs=n,
                n_residues=args.residues,
                atoms_per_residue=args.atoms_per_residue,
                seed=args.seed,
            )
            best = float("inf")
            ensemble = None
            for _ in range(max(1, args.repeat)):
                start = time.perf_counter()
                ensemble = build_hierarchy(raw, cutoff=args.cutoff)
                best = min(best, time.perf_counter() - start)
            n_ppcs = sum(len(ppe.ppcs) for ppe in ensemble.ppes.values())
            print(
                f"{m:>8} {n:>6} {best:>12.6f} {n_ppcs:>8} {len(ensemble.aap_ccs):>8}"
            )
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, workers=args.workers)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args)
        if args.command == "bench":
            return cmd_bench(args)
        return cmd_serve(args)
    except DockdrillError as exc:
        print(f"error [{exc.code}]: {exc.message}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
