"""Scriptable command-line front end.

One-shot subcommands operate on the scene file named by ``--scene``;
``marvist run script.txt`` replays a whole authoring session in memory,
which is the deterministic replay surface the acceptance suite uses.

Exit codes: 0 success, 1 error, 2 when --warn-as-error is set and the run
produced validation warnings only.
"""
from __future__ import annotations

import json
import os
import sys
from pathlib import Path

from . import errors as err
from .commands import (
    CommandParser,
    ENGINE_COMMANDS,
    READ_ONLY_COMMANDS,
    Outcome,
    add_engine_commands,
    execute,
    run_line,
)
from .engine import Engine

DEFAULT_BIND = "127.0.0.1:7878"


def build_parser() -> CommandParser:
    parser = CommandParser(prog="marvist", description=__doc__)
    parser.add_argument("--scene", default=None,
                        help="scene file for one-shot commands (default scene.json)")
    parser.add_argument("--output", choices=["text", "json"], default="text")
    parser.add_argument("--warn-as-error", action="store_true",
                        help="exit 2 when a run only produced validation warnings")
    sub = parser.add_subparsers(dest="cmd", metavar="COMMAND")
    sub.required = True
    add_engine_commands(sub)

    p = sub.add_parser("run", help="replay a command script")
    p.add_argument("script")

    p = sub.add_parser("bench", help="measure construction/propagation throughput")
    p.add_argument("--n", type=int, default=10000)
    p.add_argument("--template", choices=["cube", "sphere", "shoe", "house"],
                   default="cube")
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--out", help="write timings as CSV")
    p.add_argument("--figure", help="render timings to a PNG")

    p = sub.add_parser("serve", help="run the HTTP session service")
    p.add_argument("--bind", default=None, help="host:port (default MARVIST_BIND)")

    return parser


def _emit(outcome: Outcome, output: str) -> None:
    if output == "json":
        doc = {"command": outcome.command, "data": outcome.data,
               "warnings": outcome.warnings}
        print(json.dumps(doc, sort_keys=True))
    else:
        for line in outcome.lines:
            print(line)
    for w in outcome.warnings:
        print(f"WARN {w}", file=sys.stderr)


def _run_script(ns) -> tuple[int, int]:
    """Returns (error_count, warning_count)."""
    engine = Engine()
    warnings = 0
    text = Path(ns.script).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), 1):
        try:
            outcome = run_line(engine, line)
        except err.EngineError as e:
            print(f"ERROR {e.code}: {e} (line {lineno})", file=sys.stderr)
            return 1, warnings
        if outcome is None:
            continue
        _emit(outcome, ns.output)
        warnings += len(outcome.warnings)
    if ns.scene:
        engine.save(ns.scene)
    return 0, warnings


def _run_one_shot(ns) -> tuple[int, int]:
    scene_path = ns.scene or "scene.json"
    engine = Engine()
    if os.path.exists(scene_path):
        engine.load(scene_path)
    outcome = execute(engine, ns)
    _emit(outcome, ns.output)
    if ns.cmd not in READ_ONLY_COMMANDS:
        engine.save(scene_path)
    return 0, len(outcome.warnings)


def _run_bench(ns) -> tuple[int, int]:
    from .bench import run_bench
    rows = run_bench(ns.n, ns.template, ns.runs)
    for row in rows:
        print(f"{row['metric']} n={row['n']} template={row['template']} "
              f"median={row['median_s'] * 1000:.2f} ms over {row['runs']} runs")
    if ns.out:
        from .report import write_bench_csv
        write_bench_csv(rows, ns.out)
        print(f"wrote {ns.out}")
    if ns.figure:
        from .report import bench_figure
        bench_figure(rows, ns.figure)
        print(f"wrote {ns.figure}")
    return 0, 0


def _serve(ns) -> tuple[int, int]:
    import uvicorn

    from .service import create_app
    bind = ns.bind or os.environ.get("MARVIST_BIND", DEFAULT_BIND)
    host, _, port = bind.partition(":")
    uvicorn.run(create_app(), host=host, port=int(port or 7878), log_level="warning")
    return 0, 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except err.BadArguments as e:
        print(f"ERROR BadArguments: {e}", file=sys.stderr)
        return 1

    try:
        if ns.cmd == "run":
            code, warnings = _run_script(ns)
        elif ns.cmd == "bench":
            code, warnings = _run_bench(ns)
        elif ns.cmd == "serve":
            code, warnings = _serve(ns)
        elif ns.cmd in ENGINE_COMMANDS:
            code, warnings = _run_one_shot(ns)
        else:
            raise err.UnknownCommand(ns.cmd)
    except err.EngineError as e:
        print(f"ERROR {e.code}: {e}", file=sys.stderr)
        return 1

    if code == 0 and warnings and ns.warn_as_error:
        return 2
    return code


if __name__ == "__main__":
    raise SystemExit(main())
