"""Command line: read a graph, lay it out (interactive or headless), write
the coordinate matrix.

Exit codes: 0 success, 2 parse/validation error, 3 session error, 4 write
error. The default seed is fixed so identical invocations produce
byte-identical output.
"""

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .graph import (Graph, GraphParseError, GraphValidationError,
                    parse_edgelist, parse_json_graph, require_valid)
from .packing import pack_components
from .simulation import DivergenceError, LayoutState, SimParams, run_headless

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_SESSION = 3
EXIT_WRITE = 4


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="layoutlab",
        description="Force-directed graph layout with live browser steering.")
    p.add_argument("input", help="graph file: edge list or graph JSON")
    p.add_argument("--format", choices=("edgelist", "json"),
                   help="input format (default: json for .json files, else edgelist)")
    p.add_argument("--engine", choices=("annealed", "continuous"), default="annealed")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--out-format", choices=("csv", "json"), default="csv")
    p.add_argument("--headless", action="store_true",
                   help="run to convergence without serving the UI")
    p.add_argument("--ticks", type=int, default=300,
                   help="max ticks for headless runs (default 300)")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--port", type=int, default=0,
                   help="session port (0 = ephemeral)")
    p.add_argument("--no-open", action="store_true",
                   help="do not open the browser on launch")
    p.add_argument("--pack-components", type=float, metavar="MARGIN",
                   help="repack disconnected components with this margin")
    p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                   help="override any simulation parameter (repeatable)")
    p.add_argument("--ui-dir", help=argparse.SUPPRESS)
    return p


def _load_graph(path: str, fmt: str | None) -> Graph:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise GraphParseError(f"cannot read {path}: {exc}") from None
    if fmt is None:
        fmt = "json" if path.lower().endswith(".json") else "edgelist"
    graph = parse_json_graph(text) if fmt == "json" else parse_edgelist(text)
    return require_valid(graph)


def _build_params(engine: str, overrides: list[str]) -> SimParams:
    params = SimParams(engine=engine)
    changes = {}
    for item in overrides:
        key, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"--param expects KEY=VALUE, got {item!r}")
        changes[key.strip()] = value.strip()
    if changes:
        params.update(changes)
    return params


def write_layout(state: LayoutState, graph: Graph, fmt: str,
                 params: SimParams | None = None) -> bytes:
    """CSV (`id,x,y` header, full precision) or JSON with the final params."""
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["id", "x", "y"])
        for node, row in zip(graph.nodes, state.positions):
            writer.writerow([node.id, repr(float(row[0])), repr(float(row[1]))])
        return buf.getvalue().encode("utf-8")
    payload = {
        "layout": [
            {"id": node.id, "x": float(row[0]), "y": float(row[1])}
            for node, row in zip(graph.nodes, state.positions)
        ],
        "params": params.to_dict() if params is not None else None,
    }
    return (json.dumps(payload, allow_nan=False) + "\n").encode("utf-8")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    err = lambda msg: print(f"layoutlab: {msg}", file=sys.stderr)

    try:
        if args.ticks < 1:
            raise ValueError("--ticks must be >= 1")
        graph = _load_graph(args.input, args.format)
        params = _build_params(args.engine, args.param)
    except (GraphParseError, GraphValidationError, KeyError, ValueError) as exc:
        err(str(exc))
        return EXIT_INPUT

    try:
        if args.headless:
            state, _report = run_headless(graph, params, seed=args.seed,
                                          max_ticks=args.ticks)
        else:
            # Imported lazily: headless runs should not pay for the web stack.
            from .server import SessionConfig, SessionError, run_session

            config = SessionConfig(
                port=args.port,
                open_browser=not args.no_open,
                ui_dir=args.ui_dir,
                on_start=lambda url: print(f"layoutlab session at {url}", file=sys.stderr),
            )
            try:
                state, params = run_session(graph, params, seed=args.seed, config=config)
            except SessionError as exc:
                err(str(exc))
                return EXIT_SESSION
        if args.pack_components is not None:
            state = pack_components(graph, state, margin=args.pack_components)
    except DivergenceError as exc:
        err(str(exc))
        return EXIT_SESSION
    except ValueError as exc:
        err(str(exc))
        return EXIT_INPUT

    payload = write_layout(state, graph, args.out_format, params=params)
    try:
        if args.out is None:
            sys.stdout.buffer.write(payload)
            sys.stdout.buffer.flush()
        else:
            Path(args.out).write_bytes(payload)
    except OSError as exc:
        err(f"cannot write output: {exc}")
        return EXIT_WRITE
    return EXIT_OK


def entrypoint() -> None:
    sys.exit(main())
