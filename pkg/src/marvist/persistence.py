"""File formats: CSV ingestion, canonical scene documents, scene export,
and reality scene files.

Scene and export documents are canonical JSON: sorted keys, two-space
indent, shortest round-trip floats. Saving the same scene twice yields
byte-identical files, which the golden-file tests rely on.
"""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Any

from . import errors as err
from .channels import AttributeType, VisualChannel
from .mapping import VisualMapping
from .model import (
    Collection,
    DataAttribute,
    DataTable,
    GlyphTemplate,
    Row,
    Scene,
    ViewPose,
    VirtualGlyph,
    glyph_color,
    glyph_opacity,
    glyph_rotation,
    glyph_scale_factors,
    validate_integrity,
)
from .nudging import ValidationReport, Verdict
from .reality import CameraFrame, DetectionNoise, RealObject, TextRegion

FORMAT_VERSION = 1
MIN_EXPORT_SCALE = 1e-9

_KIND_TAGS = {
    "quant": AttributeType.QUANTITATIVE,
    "quantitative": AttributeType.QUANTITATIVE,
    "ord": AttributeType.ORDINAL,
    "ordinal": AttributeType.ORDINAL,
    "nom": AttributeType.NOMINAL,
    "nominal": AttributeType.NOMINAL,
}


# -- CSV ---------------------------------------------------------------------

def load_csv(path: str | Path, type_annotations: dict[str, dict] | None = None) -> DataTable:
    """Load an RFC-4180 CSV into a DataTable.

    Column kinds come from header suffixes (``name:quant|ord|nom``) or the
    annotation map ``{name: {"kind": ..., "categories": [...]}}``; untyped
    columns default to quantitative when every present cell parses as a
    number, nominal otherwise. Ordinal columns need an explicit category
    order. Empty cells are missing values.
    """
    annotations = type_annotations or {}
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise err.EmptyFile(str(path)) from None
        if not any(h.strip() for h in header):
            raise err.EmptyFile(f"{path}: blank header")

        names: list[str] = []
        tagged: list[AttributeType | None] = []
        for cell in header:
            name, sep, tag = cell.strip().partition(":")
            if sep:
                key = tag.strip().lower()
                if key not in _KIND_TAGS:
                    raise err.UnknownTypeTag(f"{path}: column {name!r} tag {tag!r}")
                tagged.append(_KIND_TAGS[key])
            else:
                tagged.append(None)
            names.append(name)

        raw_rows: list[list[str]] = []
        for record in reader:
            if not record:
                continue
            if len(record) != len(names):
                raise err.RaggedRows(
                    f"{path}: line {reader.line_num} has {len(record)} fields, "
                    f"expected {len(names)}")
            raw_rows.append(record)

    kinds: list[AttributeType] = []
    for i, name in enumerate(names):
        note = annotations.get(name, {})
        kind = note.get("kind")
        if kind is not None:
            key = str(kind).lower()
            if key not in _KIND_TAGS:
                raise err.UnknownTypeTag(f"column {name!r} kind {kind!r}")
            kinds.append(_KIND_TAGS[key])
        elif tagged[i] is not None:
            kinds.append(tagged[i])
        else:
            cells = [r[i] for r in raw_rows if r[i].strip() != ""]
            kinds.append(AttributeType.QUANTITATIVE if cells and all(_is_number(c) for c in cells)
                         else AttributeType.NOMINAL)

    attributes: list[DataAttribute] = []
    columns: list[list] = []
    for i, (name, kind) in enumerate(zip(names, kinds)):
        cells = [r[i].strip() for r in raw_rows]
        if kind is AttributeType.QUANTITATIVE:
            values = []
            for c in cells:
                if c == "":
                    values.append(None)
                elif _is_number(c):
                    values.append(float(c))
                else:
                    raise err.DomainViolation(
                        f"column {name!r}: non-numeric cell {c!r}")
            present = [v for v in values if v is not None]
            domain = (min(present), max(present)) if present else (0.0, 0.0)
            attributes.append(DataAttribute(name, kind, domain))
        elif kind is AttributeType.ORDINAL:
            categories = annotations.get(name, {}).get("categories")
            if not categories:
                raise err.MissingCategories(
                    f"ordinal column {name!r} needs an explicit category order")
            values = [c if c != "" else None for c in cells]
            attributes.append(DataAttribute(name, kind, tuple(categories)))
        else:
            values = [c if c != "" else None for c in cells]
            seen: list[str] = []
            for v in values:
                if v is not None and v not in seen:
                    seen.append(v)
            if not seen:
                seen = ["(empty)"]
            attributes.append(DataAttribute(name, kind, tuple(seen)))
        columns.append(values)

    rows = [Row(i, tuple(col[i] for col in columns)) for i in range(len(raw_rows))]
    return DataTable(attributes, rows)


def _is_number(cell: str) -> bool:
    try:
        v = float(cell)
    except ValueError:
        return False
    return math.isfinite(v)


# -- canonical JSON ------------------------------------------------------------

def canonical_dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _vec(v) -> list[float]:
    return [float(x) for x in v]


# -- scene documents -----------------------------------------------------------

def scene_to_document(scene: Scene) -> dict:
    doc = {
        "format_version": FORMAT_VERSION,
        "table": {
            "attributes": [
                {
                    "name": a.name,
                    "kind": a.kind.value,
                    "domain": list(a.domain),
                }
                for a in scene.table.attributes
            ],
            "rows": [{"id": r.id, "values": list(r.values)} for r in scene.table.rows],
        },
        "templates": [_template_doc(t) for t in scene.templates.values()],
        "glyphs": [
            {
                "id": g.id,
                "row_id": g.row_id,
                "template_id": g.template_id,
                "translation": _vec(g.translation),
                "rotation": _vec(g.rotation),
                "channel_values": {ch.value: v for ch, v in sorted(
                    g.channel_values.items(), key=lambda kv: kv[0].value)},
            }
            for g in scene.glyphs.values()
        ],
        "collections": [
            {"id": c.id, "member_ids": list(c.member_ids), "grouping_key": c.grouping_key}
            for c in scene.collections.values()
        ],
        "mappings": [
            {
                "attribute": m.attribute,
                "channel": m.channel.value,
                "scale": m.scale,
                "baseline": m.baseline,
                "palette_seed": m.palette_seed,
            }
            for m in scene.mappings
        ],
        "real_objects": [_real_object_doc(o) for o in scene.real_objects],
        "view": _pose_doc(scene.view),
        "light_estimate": scene.light_estimate,
        "frame": _frame_doc(scene.frame) if scene.frame is not None else None,
        "diagnostics": [report_to_document(r) for r in scene.diagnostics],
        "counters": {"glyph": scene._glyph_seq, "collection": scene._collection_seq},
    }
    doc.update(getattr(scene, "extras", {}))
    return doc


def _template_doc(t: GlyphTemplate) -> dict:
    return {
        "id": t.id,
        "base_extents": _vec(t.base_extents),
        "symmetry_orders": list(t.symmetry_orders),
        "base_color": _vec(t.base_color),
        "material_luminance": t.material_luminance,
        "mesh_ref": t.mesh_ref,
    }


def _pose_doc(p: ViewPose) -> dict:
    return {"position": _vec(p.position), "forward": _vec(p.forward), "up": _vec(p.up)}


def _frame_doc(f: CameraFrame) -> dict:
    return {
        "pose": _pose_doc(f.pose),
        "rows": len(f.luminance),
        "cols": len(f.luminance[0]),
        "luminance": [s for row in f.luminance for s in row],
        "light_estimate": f.light_estimate,
        "fov": {"h": f.fov_h_deg, "v": f.fov_v_deg},
    }


def _real_object_doc(o: RealObject) -> dict:
    return {
        "id": o.id,
        "label": o.label,
        "translation": _vec(o.translation),
        "rotation": _vec(o.rotation),
        "extents": _vec(o.extents),
        "text_regions": [{"text": r.text, "area": r.area} for r in o.text_regions],
        "surface_luminance": o.surface_luminance,
        "shape_factor": o.shape_factor,
        "detected": o.detected,
        "detection_index": o.detection_index,
    }


def report_to_document(r: ValidationReport) -> dict:
    return {
        "attribute": r.attribute,
        "channel": r.channel.value,
        "overall_valid": r.overall_valid,
        "verdicts": [
            {"rule": v.rule, "valid": v.valid, "metric": v.metric, "message": v.message}
            for v in r.verdicts
        ],
    }


_KNOWN_KEYS = {
    "format_version", "table", "templates", "glyphs", "collections", "mappings",
    "real_objects", "view", "light_estimate", "frame", "diagnostics", "counters",
}


def _channel(name: str) -> VisualChannel:
    try:
        return VisualChannel(name)
    except ValueError:
        raise err.IntegrityViolation(f"unknown channel {name!r}") from None


def scene_from_document(doc: dict) -> Scene:
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise err.VersionMismatch(f"unsupported format_version {version!r}")
    scene = Scene()
    tdoc = doc.get("table", {"attributes": [], "rows": []})
    attributes = [
        DataAttribute(
            a["name"],
            AttributeType(a["kind"]),
            tuple(a["domain"]),
        )
        for a in tdoc["attributes"]
    ]
    rows = [Row(r["id"], tuple(r["values"])) for r in tdoc["rows"]]
    scene.table = DataTable(attributes, rows)
    for t in doc.get("templates", []):
        scene.templates[t["id"]] = template_from_document(t)
    for g in doc.get("glyphs", []):
        glyph = VirtualGlyph(
            g["id"], g["row_id"], g["template_id"],
            translation=tuple(g["translation"]),
            rotation=tuple(g["rotation"]),
            channel_values={_channel(k): v for k, v in g["channel_values"].items()},
        )
        scene.glyphs[glyph.id] = glyph
    for c in doc.get("collections", []):
        scene.collections[c["id"]] = Collection(c["id"], list(c["member_ids"]),
                                                c.get("grouping_key"))
    for m in doc.get("mappings", []):
        scene.mappings.append(VisualMapping(
            m["attribute"], _channel(m["channel"]), m["scale"],
            m.get("baseline", 0.15), m.get("palette_seed", 0)))
    scene.real_objects = [_real_object_from(o) for o in doc.get("real_objects", [])]
    if "view" in doc:
        scene.view = _pose_from(doc["view"])
    scene.light_estimate = doc.get("light_estimate", 1.0)
    if doc.get("frame") is not None:
        scene.frame = _frame_from(doc["frame"])
    scene.diagnostics = [report_from_document(d) for d in doc.get("diagnostics", [])]
    counters = doc.get("counters", {})
    scene._glyph_seq = counters.get("glyph", len(scene.glyphs))
    scene._collection_seq = counters.get("collection", len(scene.collections))
    scene.extras = {k: v for k, v in doc.items() if k not in _KNOWN_KEYS}
    validate_integrity(scene)
    return scene


def template_from_document(t: dict) -> GlyphTemplate:
    version = t.get("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise err.VersionMismatch(f"unsupported template format_version {version!r}")
    try:
        extents = tuple(float(x) for x in t["base_extents"])
        if len(extents) != 3:
            raise ValueError
        return GlyphTemplate(
            t["id"],
            extents,
            tuple(int(x) for x in t.get("symmetry_orders", (1, 1, 1))),
            tuple(float(x) for x in t.get("base_color", (0.0, 0.0, 0.5))),
            float(t.get("material_luminance", 0.5)),
            t.get("mesh_ref"),
        )
    except err.MalformedTemplate:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise err.MalformedTemplate(f"template document invalid: {e!r}") from None


def _pose_from(d: dict) -> ViewPose:
    return ViewPose(tuple(d["position"]), tuple(d["forward"]), tuple(d["up"]))


def _frame_from(d: dict) -> CameraFrame:
    rows, cols = d["rows"], d["cols"]
    flat = d["luminance"]
    if len(flat) != rows * cols:
        raise err.DomainViolation("frame luminance length != rows * cols")
    grid = tuple(tuple(flat[r * cols:(r + 1) * cols]) for r in range(rows))
    return CameraFrame(_pose_from(d["pose"]), grid, d.get("light_estimate", 1.0),
                       d.get("fov", {}).get("h", 60.0), d.get("fov", {}).get("v", 45.0))


def _real_object_from(o: dict) -> RealObject:
    return RealObject(
        o["id"], o["label"], tuple(o["translation"]), tuple(o["rotation"]),
        tuple(o["extents"]),
        tuple(TextRegion(r["text"], r["area"]) for r in o.get("text_regions", [])),
        o.get("surface_luminance", 0.5),
        o.get("shape_factor", 1.0),
        o.get("detected", False),
        o.get("detection_index", -1),
    )


def report_from_document(d: dict) -> ValidationReport:
    return ValidationReport(
        _channel(d["channel"]),
        d["attribute"],
        tuple(Verdict(v["rule"], v["valid"], v["metric"], v["message"])
              for v in d["verdicts"]),
    )


def _write_text(path: str | Path, text: str) -> None:
    path = Path(path)
    if path.parent != Path("."):
        path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def save_scene(scene: Scene, path: str | Path) -> None:
    _write_text(path, canonical_dumps(scene_to_document(scene)))


def load_scene(path: str | Path) -> Scene:
    return scene_from_document(json.loads(Path(path).read_text(encoding="utf-8")))


# -- export ----------------------------------------------------------------------

def export_nodes(scene: Scene) -> list[dict]:
    """Flat render nodes derived from the glyphs' channel values."""
    nodes = []
    for g in scene.glyphs.values():
        t = scene.template(g.template_id)
        scale = [max(s, MIN_EXPORT_SCALE) for s in glyph_scale_factors(g, t)]
        nodes.append({
            "id": g.id,
            "template": g.template_id,
            "translation": _vec(g.translation),
            "rotation": _vec(glyph_rotation(g)),
            "scale": scale,
            "color": _vec(glyph_color(g, t)),
            "opacity": glyph_opacity(g),
        })
    return nodes


def export_document(scene: Scene) -> dict:
    return {"format_version": FORMAT_VERSION, "nodes": export_nodes(scene)}


def export_scene(scene: Scene, path: str | Path) -> None:
    _write_text(path, canonical_dumps(export_document(scene)))


# -- reality scene files -----------------------------------------------------------

def load_reality_document(path: str | Path) -> tuple[list[RealObject], CameraFrame]:
    """Ground-truth objects plus the camera frame from a reality scene file."""
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    objects = [
        RealObject(
            o["id"], o.get("label", o["id"]),
            tuple(o["translation"]),
            tuple(o.get("rotation", (1.0, 0.0, 0.0, 0.0))),
            tuple(o["extents"]),
            tuple(TextRegion(r["text"], r["area"]) for r in o.get("text_regions", [])),
            o.get("surface_luminance", 0.5),
            o.get("shape_factor", 1.0),
        )
        for o in doc["objects"]
    ]
    cam = doc["camera"]
    fdoc = doc["frame"]
    pose = _pose_from(cam["pose"])
    rows, cols = fdoc["rows"], fdoc["cols"]
    flat = fdoc["luminance"]
    if len(flat) != rows * cols:
        raise err.DomainViolation("frame luminance length != rows * cols")
    grid = tuple(tuple(flat[r * cols:(r + 1) * cols]) for r in range(rows))
    frame = CameraFrame(pose, grid, cam.get("light_estimate", 1.0),
                        cam.get("fov", {}).get("h", 60.0),
                        cam.get("fov", {}).get("v", 45.0))
    return objects, frame


def noise_from_args(extent_sigma: float, position_sigma: float,
                    drop: float, seed: int) -> DetectionNoise:
    return DetectionNoise(extent_sigma, position_sigma, drop, seed)
