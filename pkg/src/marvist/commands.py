"""Command vocabulary shared by the CLI, script files, and the HTTP service.

Every authoring surface funnels through ``run_line``/``execute`` so a script
replay, a CLI invocation, and a service session produce identical scenes.
"""
from __future__ import annotations

import argparse
import json
import shlex
from dataclasses import dataclass, field

from . import errors as err
from .autolayout import JoinSpec
from .channels import VisualChannel
from .engine import DEFAULT_GRID_SPACING, Engine
from .layout import PoseSample, PoseTrace
from .model import ViewPose
from .nudging import ValidationReport
from .persistence import report_to_document
from .reality import DetectionNoise
from .sync import SyncRequest

CHANNEL_NAMES = [c.value for c in VisualChannel]


@dataclass
class Outcome:
    command: str
    data: dict = field(default_factory=dict)
    lines: list[str] = field(default_factory=list)
    report: ValidationReport | None = None
    warnings: list[str] = field(default_factory=list)


class CommandParser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so scripts and the HTTP
    service can surface parse failures as engine errors."""

    def error(self, message):
        raise err.BadArguments(message)


def _vec3(text: str):
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected x,y,z got {text!r}")
    return tuple(float(p) for p in parts)


def _channel(text: str) -> VisualChannel:
    try:
        return VisualChannel(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"unknown channel {text!r}; one of {', '.join(CHANNEL_NAMES)}")


def build_engine_parser(prog: str = "marvist") -> CommandParser:
    """Parser covering the engine command vocabulary (no host-side commands)."""
    parser = CommandParser(prog=prog, add_help=False)
    sub = parser.add_subparsers(dest="cmd", metavar="COMMAND")
    sub.required = True
    add_engine_commands(sub)
    return parser


def add_engine_commands(sub) -> None:
    p = sub.add_parser("load-data", help="ingest a CSV data table")
    p.add_argument("path")
    p.add_argument("--types", help="JSON file with column type annotations")

    p = sub.add_parser("load-reality", help="load a reality scene and run detection")
    p.add_argument("path")
    p.add_argument("--noise-extent", type=float, default=0.0)
    p.add_argument("--noise-pos", type=float, default=0.0)
    p.add_argument("--drop", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("fetch-glyph", help="fetch a glyph template (cache first)")
    p.add_argument("name")

    p = sub.add_parser("instantiate", help="objectify rows as glyphs of a template")
    p.add_argument("--template", required=True)
    p.add_argument("--where", help="attr=value row filter")
    p.add_argument("--rows", help="comma-separated row ids")
    p.add_argument("--spacing", type=float, default=DEFAULT_GRID_SPACING,
                   help="initial grid spacing in meters (0 keeps all at the origin)")

    p = sub.add_parser("group", help="group glyphs into a collection")
    p.add_argument("--glyphs", help="comma-separated glyph ids")
    p.add_argument("--by-template", help="group all uncollected glyphs of a template")
    p.add_argument("--key", help="grouping attribute name")

    p = sub.add_parser("bind", help="bind a data attribute to a visual channel")
    p.add_argument("--attr", required=True)
    p.add_argument("--channel", required=True, type=_channel)
    p.add_argument("--scale", type=float)
    p.add_argument("--palette-seed", type=int, default=0)

    p = sub.add_parser("unbind", help="remove a visual mapping")
    p.add_argument("--attr", required=True)
    p.add_argument("--channel", required=True, type=_channel)

    p = sub.add_parser("rescale", help="multiply a mapping's scale by a factor")
    p.add_argument("--attr", required=True)
    p.add_argument("--channel", required=True, type=_channel)
    p.add_argument("--factor", required=True, type=float)

    p = sub.add_parser("nudge", help="print ranked channels for an attribute")
    p.add_argument("--attr", required=True)
    p.add_argument("--out", help="write the ranking as CSV")
    p.add_argument("--figure", help="render the ranking to a PNG")

    p = sub.add_parser("sync", help="synchronize a glyph channel with a real object")
    p.add_argument("--object", required=True)
    p.add_argument("--source", required=True, help="extracted channel name")
    p.add_argument("--glyph", required=True)
    p.add_argument("--target", required=True, type=_channel)

    p = sub.add_parser("autolayout", help="join real objects to glyphs and place them")
    p.add_argument("--mode", required=True, choices=["rank", "equality"])
    p.add_argument("--object-channel", required=True)
    p.add_argument("--attr", required=True)
    p.add_argument("--anchor", choices=["center", "top", "front"], default="top")
    p.add_argument("--clearance", type=float, default=0.0)
    p.add_argument("--collection", help="restrict to one collection's members")

    p = sub.add_parser("sketch", help="distribute a collection along a screen path")
    p.add_argument("--collection", required=True)
    p.add_argument("--path", help="JSON file with screen_points")
    p.add_argument("--points", help="inline path: u,v;u,v;... in [0,1] screen space")
    p.add_argument("--plane-y", type=float, default=0.0)

    p = sub.add_parser("brush", help="distribute a collection along a device sweep")
    p.add_argument("--collection", required=True)
    p.add_argument("--path", required=True, help="JSON file with trace samples")
    p.add_argument("--reach", type=float, required=True)

    p = sub.add_parser("copy-layout", help="transfer a collection's layout to another")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--offset", type=_vec3)

    p = sub.add_parser("stack", help="snap near-coincident collection members into stacks")
    p.add_argument("--collection", required=True)

    p = sub.add_parser("move", help="move a glyph on its horizontal plane")
    p.add_argument("--glyph", required=True)
    p.add_argument("--du", type=float, required=True)
    p.add_argument("--dv", type=float, required=True)

    p = sub.add_parser("pick", help="grip a glyph or collection at a distance")
    p.add_argument("--target", required=True)
    p.add_argument("--distance", type=float, required=True)

    p = sub.add_parser("view", help="set the authoring view pose")
    p.add_argument("--position", type=_vec3, required=True)
    p.add_argument("--forward", type=_vec3, required=True)
    p.add_argument("--up", type=_vec3, default=(0.0, 1.0, 0.0))

    p = sub.add_parser("export", help="export render nodes")
    p.add_argument("path")

    p = sub.add_parser("save", help="save the scene document")
    p.add_argument("path")

    p = sub.add_parser("load", help="load a scene document")
    p.add_argument("path")

    sub.add_parser("undo", help="undo the last command")
    sub.add_parser("redo", help="redo the last undone command")


ENGINE_COMMANDS = {
    "load-data", "load-reality", "fetch-glyph", "instantiate", "group", "bind",
    "unbind", "rescale", "nudge", "sync", "autolayout", "sketch", "brush",
    "copy-layout", "stack", "move", "pick", "view", "export", "save", "load",
    "undo", "redo",
}

READ_ONLY_COMMANDS = {"nudge", "export", "save"}


def _report_warnings(report: ValidationReport) -> list[str]:
    return [f"{v.rule}: {v.message} (metric={format(v.metric, '.6g')})"
            for v in report.failures()]


def _row_filter(engine: Engine, ns):
    if ns.where and ns.rows:
        raise err.BadArguments("use either --where or --rows, not both")
    if ns.where:
        name, sep, raw = ns.where.partition("=")
        if not sep:
            raise err.BadArguments("--where expects attr=value")
        attr = engine.scene.table.attribute(name)
        col = engine.scene.table.column_index(name)
        from .channels import AttributeType
        target = float(raw) if attr.kind is AttributeType.QUANTITATIVE else raw
        return lambda r: r.values[col] == target
    if ns.rows:
        wanted = {int(x) for x in ns.rows.split(",")}
        return lambda r: r.id in wanted
    return None


def execute(engine: Engine, ns) -> Outcome:
    try:
        return _execute(engine, ns)
    except OSError as e:
        raise err.IOFailure(str(e)) from None
    except json.JSONDecodeError as e:
        raise err.IOFailure(f"malformed JSON: {e}") from None


def _execute(engine: Engine, ns) -> Outcome:
    cmd = ns.cmd
    if cmd == "load-data":
        annotations = None
        if ns.types:
            annotations = json.loads(open(ns.types, encoding="utf-8").read())
        n = engine.load_data(ns.path, annotations)
        return Outcome(cmd, {"rows": n}, [f"loaded {n} rows"])

    if cmd == "load-reality":
        noise = DetectionNoise(ns.noise_extent, ns.noise_pos, ns.drop, ns.seed)
        before = len(engine.events)
        n = engine.load_reality(ns.path, noise)
        lines = engine.events[before:] + [f"detected {n} objects"]
        return Outcome(cmd, {"detected": n}, lines)

    if cmd == "fetch-glyph":
        tid = engine.fetch_glyph(ns.name)
        return Outcome(cmd, {"template": tid}, [f"template {tid} ready"])

    if cmd == "instantiate":
        spacing = None if ns.spacing == 0 else ns.spacing
        ids = engine.instantiate(ns.template, _row_filter(engine, ns), spacing)
        return Outcome(cmd, {"glyphs": ids}, [f"instantiated {len(ids)} glyphs"])

    if cmd == "group":
        if bool(ns.glyphs) == bool(ns.by_template):
            raise err.BadArguments("group needs exactly one of --glyphs / --by-template")
        if ns.glyphs:
            cid = engine.group(ns.glyphs.split(","), ns.key)
        else:
            cid = engine.group_by_template(ns.by_template, ns.key)
        members = engine.scene.collection(cid).member_ids
        return Outcome(cmd, {"collection": cid, "members": list(members)},
                       [f"collection {cid} with {len(members)} members"])

    if cmd == "bind":
        mapping, report = engine.bind(ns.attr, ns.channel, ns.scale, ns.palette_seed)
        return Outcome(
            cmd,
            {"attribute": mapping.attribute, "channel": mapping.channel.value,
             "scale": mapping.scale, "report": report_to_document(report)},
            [f"bound {mapping.attribute} -> {mapping.channel.value} "
             f"(scale {format(mapping.scale, '.6g')})"],
            report=report,
            warnings=_report_warnings(report),
        )

    if cmd == "unbind":
        engine.unbind(ns.attr, ns.channel)
        return Outcome(cmd, {}, [f"unbound {ns.attr} -> {ns.channel.value}"])

    if cmd == "rescale":
        mapping, report = engine.rescale(ns.attr, ns.channel, ns.factor)
        return Outcome(cmd,
                       {"scale": mapping.scale, "report": report_to_document(report)},
                       [f"scale now {format(mapping.scale, '.6g')}"],
                       report=report,
                       warnings=_report_warnings(report))

    if cmd == "nudge":
        ranked = engine.ranked(ns.attr)
        recommended = engine.recommend(ns.attr)
        lines = []
        for i, entry in enumerate(ranked, 1):
            status = "valid" if entry.valid else "INVALID: " + "; ".join(entry.reasons)
            marker = " <- recommended" if entry.channel is recommended.channel else ""
            lines.append(f"{i}. {entry.channel.value} [{status}]{marker}")
        data = {
            "attribute": ns.attr,
            "channels": [
                {"channel": e.channel.value, "valid": e.valid, "reasons": list(e.reasons)}
                for e in ranked
            ],
            "recommended": recommended.channel.value,
        }
        if ns.out:
            from .report import write_ranking_csv
            write_ranking_csv(ns.attr, ranked, ns.out)
            lines.append(f"wrote {ns.out}")
        if ns.figure:
            from .report import ranking_figure
            ranking_figure(ns.attr, ranked, recommended.channel, ns.figure)
            lines.append(f"wrote {ns.figure}")
        return Outcome(cmd, data, lines)

    if cmd == "sync":
        outcome = engine.sync(SyncRequest(ns.object, ns.source, ns.glyph, ns.target))
        return Outcome(
            cmd,
            {"mode": outcome.mode, "value": outcome.value,
             "new_scale": outcome.new_scale, "touched": outcome.touched_glyphs},
            [f"synced {outcome.touched_glyphs} glyphs ({outcome.mode})"])

    if cmd == "autolayout":
        spec = JoinSpec(ns.mode, ns.object_channel, ns.attr, ns.anchor, ns.clearance)
        corr = engine.autolayout(spec, ns.collection)
        warnings = []
        for oid in corr.unmatched_objects:
            warnings.append(f"join: real object {oid} unmatched")
        for gid in corr.unmatched_glyphs:
            warnings.append(f"join: glyph {gid} unmatched")
        return Outcome(cmd, {"pairs": [list(p) for p in corr.pairs]},
                       [f"placed {len(corr.pairs)} glyphs"], warnings=warnings)

    if cmd == "sketch":
        if bool(ns.path) == bool(ns.points):
            raise err.BadArguments("sketch needs exactly one of --path / --points")
        if ns.path:
            doc = json.loads(open(ns.path, encoding="utf-8").read())
            points = [tuple(p) for p in doc["screen_points"]]
        else:
            points = [tuple(float(x) for x in pair.split(","))
                      for pair in ns.points.split(";") if pair]
        engine.sketch(ns.collection, points, ns.plane_y)
        return Outcome(cmd, {}, [f"distributed {ns.collection} along sketch"])

    if cmd == "brush":
        doc = json.loads(open(ns.path, encoding="utf-8").read())
        samples = tuple(
            PoseSample(s["t"], ViewPose(tuple(s["pose"]["position"]),
                                        tuple(s["pose"]["forward"]),
                                        tuple(s["pose"]["up"])))
            for s in doc["trace"])
        engine.brush(ns.collection, PoseTrace(samples), ns.reach)
        return Outcome(cmd, {}, [f"distributed {ns.collection} along brush"])

    if cmd == "copy-layout":
        warnings = engine.copy_layout(ns.source, ns.target, ns.offset)
        return Outcome(cmd, {}, [f"copied layout {ns.source} -> {ns.target}"],
                       warnings=warnings)

    if cmd == "stack":
        engine.stack(ns.collection)
        return Outcome(cmd, {}, [f"stacked {ns.collection}"])

    if cmd == "move":
        engine.move(ns.glyph, ns.du, ns.dv)
        return Outcome(cmd, {}, [f"moved {ns.glyph}"])

    if cmd == "pick":
        engine.pick(ns.target, ns.distance)
        return Outcome(cmd, {}, [f"picked {ns.target}"])

    if cmd == "view":
        engine.set_view(ViewPose(ns.position, ns.forward, ns.up))
        return Outcome(cmd, {}, ["view updated"])

    if cmd == "export":
        engine.export(ns.path)
        return Outcome(cmd, {"path": ns.path}, [f"exported {ns.path}"])

    if cmd == "save":
        engine.save(ns.path)
        return Outcome(cmd, {"path": ns.path}, [f"saved {ns.path}"])

    if cmd == "load":
        engine.load(ns.path)
        return Outcome(cmd, {}, [f"loaded {ns.path}"])

    if cmd == "undo":
        engine.undo()
        return Outcome(cmd, {}, ["undone"])

    if cmd == "redo":
        engine.redo()
        return Outcome(cmd, {}, ["redone"])

    raise err.UnknownCommand(cmd)


_LINE_PARSER = build_engine_parser()


def run_line(engine: Engine, line: str) -> Outcome | None:
    """Execute one script/service command line; None for blanks/comments."""
    argv = shlex.split(line, comments=True)
    if not argv:
        return None
    try:
        ns = _LINE_PARSER.parse_args(argv)
    except SystemExit:   # argparse internals can still exit on some paths
        raise err.BadArguments(f"cannot parse: {line.strip()!r}") from None
    return execute(engine, ns)
