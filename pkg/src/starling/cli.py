"""Command-line front door: validate, read, and graph STAR domain files.

Exit codes: 0 success, 1 diagnostics reported, 2 usage error, 3 engine
error.  Diagnostics and error messages go to stderr; documents and raw
output go to stdout so pipelines can consume them cleanly.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import modelio
from .engine import EngineError, TraceKind, iter_session_results
from .engine.semantics import _declared_sessions
from .lang import has_errors, parse_domain, validate_domain
from .lang.ast import Domain, Visibility

EXIT_OK = 0
EXIT_DIAGNOSTICS = 1
EXIT_USAGE = 2
EXIT_ENGINE = 3

_ALL_SESSIONS = -1


def _report_arg(value: str) -> frozenset[TraceKind]:
    kinds = set()
    for name in value.split(","):
        name = name.strip()
        if not name:
            continue
        try:
            kinds.add(TraceKind(name))
        except ValueError:
            raise argparse.ArgumentTypeError(
                f"unknown report category {name!r}; expected "
                + ",".join(k.value for k in TraceKind)
            )
    return frozenset(kinds)


def _visible_arg(value: str) -> Visibility:
    if value == "all":
        return Visibility.everything()
    # Reuse the domain parser for the pattern list syntax.
    domain, diagnostics = parse_domain(f"fluents([{value}]).")
    if has_errors(diagnostics) or not domain.fluents.patterns:
        raise argparse.ArgumentTypeError(f"bad visibility pattern list {value!r}")
    return Visibility.concepts(domain.fluents.patterns)


def _session_arg(value: str) -> int:
    if value == "all":
        return _ALL_SESSIONS
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a session number or 'all', got {value!r}")
    if n < 0:
        raise argparse.ArgumentTypeError("session numbers are non-negative")
    return n


def _slack_arg(value: str) -> int:
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {value!r}")
    if n < 0:
        raise argparse.ArgumentTypeError("horizon slack is non-negative")
    return n


def _read_file(path: str) -> str | None:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return None


def _check(text: str) -> tuple[Domain, bool]:
    """Parse and validate, printing diagnostics; returns (domain, ok)."""
    domain, diagnostics = parse_domain(text)
    diagnostics = diagnostics + validate_domain(domain)
    for diagnostic in diagnostics:
        print(diagnostic, file=sys.stderr)
    return domain, not has_errors(diagnostics)


def cmd_validate(args: argparse.Namespace) -> int:
    text = _read_file(args.path)
    if text is None:
        return EXIT_USAGE
    _, ok = _check(text)
    return EXIT_OK if ok else EXIT_DIAGNOSTICS


def cmd_read(args: argparse.Namespace) -> int:
    text = _read_file(args.path)
    if text is None:
        return EXIT_USAGE
    domain, ok = _check(text)
    if not ok:
        return EXIT_DIAGNOSTICS
    if args.visible is not None:
        visible = args.visible
    else:
        visible = {decl.session: decl.visible for decl in _declared_sessions(domain)}
    collected = []
    matched = False
    try:
        for result in iter_session_results(domain, args.horizon_slack, args.report):
            if args.session != _ALL_SESSIONS and result.session != args.session:
                continue
            matched = True
            if args.format == "raw":
                for line in modelio.iter_raw_lines(result, visible, args.report):
                    print(line, flush=True)
            else:
                collected.append(result)
    except EngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ENGINE
    if not matched:
        print(f"error: session {args.session} is not declared", file=sys.stderr)
        return EXIT_USAGE
    if args.format == "model":
        print(json.dumps(modelio.render_model_document(collected, visible)))
    return EXIT_OK


def cmd_graph(args: argparse.Namespace) -> int:
    text = _read_file(args.path)
    if text is None:
        return EXIT_USAGE
    domain, ok = _check(text)
    if not ok:
        return EXIT_DIAGNOSTICS
    graph = modelio.export_bk_graph(domain)
    if args.format == "dot":
        sys.stdout.write(modelio.graph_to_dot(graph))
    else:
        print(json.dumps(graph))
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    from .service.app import serve
    from .service.config import load_config

    config = load_config(
        port=args.port,
        workers=args.workers,
        job_ttl=args.job_ttl,
        max_source=args.max_source,
        store=args.store,
    )
    serve(config)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="starling",
        description="Story comprehension over STAR domain files.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check a file and print diagnostics")
    p_validate.add_argument("path")
    p_validate.set_defaults(func=cmd_validate)

    p_read = sub.add_parser("read", help="run comprehension sessions")
    p_read.add_argument("path")
    p_read.add_argument("--format", choices=("raw", "model"), default="raw")
    p_read.add_argument(
        "--report",
        type=_report_arg,
        default=frozenset(),
        metavar="LIST",
        help="comma-joined report categories: "
        + ",".join(k.value for k in TraceKind),
    )
    p_read.add_argument("--horizon-slack", type=_slack_arg, default=2, metavar="N")
    p_read.add_argument(
        "--session",
        type=_session_arg,
        default=_ALL_SESSIONS,
        metavar="N|all",
        help="run one declared session, or all (default)",
    )
    p_read.add_argument(
        "--visible",
        type=_visible_arg,
        default=None,
        metavar="all|LIST",
        help="override the file's visibility: 'all' or a pattern list",
    )
    p_read.set_defaults(func=cmd_read)

    p_graph = sub.add_parser("graph", help="export the background-knowledge graph")
    p_graph.add_argument("path")
    p_graph.add_argument("--format", choices=("graph", "dot"), default="graph")
    p_graph.set_defaults(func=cmd_graph)

    p_serve = sub.add_parser("serve", help="start the HTTP service")
    p_serve.add_argument("--port", type=int, default=None)
    p_serve.add_argument("--workers", type=int, default=None)
    p_serve.add_argument("--job-ttl", type=int, default=None, metavar="SECONDS")
    p_serve.add_argument("--max-source", type=int, default=None, metavar="BYTES")
    p_serve.add_argument("--store", default=None, metavar="PATH")
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        # the reader went away (e.g. piped into head); park stdout on
        # /dev/null so the interpreter's exit-time flush stays quiet
        try:
            os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        except OSError:
            pass
        return EXIT_DIAGNOSTICS


if __name__ == "__main__":
    sys.exit(main())
