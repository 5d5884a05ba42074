"""Auto-layout: pair detected real objects with data points (rank join on a
numeric channel or equality join on the text channel) and move each virtual
glyph to its physical referent.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import errors as err
from .geometry import Vec3
from .model import Scene, VirtualGlyph, glyph_extents
from .reality import RealObject, channel_dimension, extract_channels

ANCHORS = ("center", "top", "front")


@dataclass(frozen=True)
class JoinSpec:
    mode: str                    # "rank" | "equality"
    object_channel: str          # name in ExtractedChannels
    data_attribute: str
    anchor: str = "top"
    clearance: float = 0.0

    def __post_init__(self):
        if self.mode not in ("rank", "equality"):
            raise err.DomainViolation(f"unknown join mode {self.mode!r}")
        if self.anchor not in ANCHORS:
            raise err.DomainViolation(f"unknown anchor {self.anchor!r}")
        if self.clearance < 0.0:
            raise err.DomainViolation("clearance must be >= 0")
        if self.mode == "rank" and channel_dimension(self.object_channel) == "text":
            raise err.IncompatibleChannels("rank join needs a numeric object channel")
        if self.mode == "equality" and self.object_channel != "text":
            raise err.IncompatibleChannels("equality join pairs on the text channel")


@dataclass(frozen=True)
class Correspondence:
    pairs: tuple[tuple[str, str], ...]           # (real_object_id, glyph_id)
    unmatched_objects: tuple[str, ...] = ()
    unmatched_glyphs: tuple[str, ...] = ()

    def __post_init__(self):
        objs = [a for a, _ in self.pairs]
        glyphs = [b for _, b in self.pairs]
        if len(set(objs)) != len(objs) or len(set(glyphs)) != len(glyphs):
            raise err.DomainViolation("correspondence is not injective")


def join(
    scene: Scene,
    objects: Sequence[RealObject],
    glyphs: Sequence[VirtualGlyph],
    spec: JoinSpec,
) -> Correspondence:
    """Pair objects with glyphs per the join spec.

    Rank mode sorts both sides descending (greatest channel value to the
    greatest data value) and requires equal counts; ties break by detection
    index / row id ascending. Equality mode pairs on exact string equality
    between the object text channel and the attribute value; unmatched
    participants are reported, not errors.
    """
    attr = scene.table.attribute(spec.data_attribute)
    from .channels import AttributeType
    if spec.mode == "rank" and attr.kind is AttributeType.NOMINAL:
        raise err.IncompatibleChannels(
            "rank join needs an ordered attribute (ordinal or quantitative)")
    if spec.mode == "equality" and attr.kind is not AttributeType.NOMINAL:
        raise err.IncompatibleChannels("equality join needs a nominal attribute")

    def data_value(g: VirtualGlyph):
        return scene.glyph_row_value(g, spec.data_attribute)

    participants = [g for g in glyphs if data_value(g) is not None]

    if spec.mode == "rank":
        channel_values = {}
        for o in objects:
            v = extract_channels(o).get(spec.object_channel)
            if v is None:
                raise err.IncompatibleChannels(
                    f"object {o.id} has no {spec.object_channel}")
            channel_values[o.id] = v
        if len(objects) != len(participants):
            raise err.CardinalityMismatch(
                f"rank join needs equal counts: {len(objects)} objects vs "
                f"{len(participants)} glyphs")
        objs = sorted(objects, key=lambda o: (-channel_values[o.id], o.detection_index))
        gs = sorted(participants, key=lambda g: (-attr.numeric(data_value(g)), g.row_id))
        return Correspondence(tuple((o.id, g.id) for o, g in zip(objs, gs)))

    texts: dict[str, RealObject] = {}
    for o in objects:
        t = extract_channels(o).text
        if t is None:
            continue
        if t in texts:
            raise err.DuplicateKey(f"text {t!r} on {texts[t].id} and {o.id}")
        texts[t] = o
    names: dict[str, VirtualGlyph] = {}
    for g in participants:
        v = str(data_value(g))
        if v in names:
            raise err.DuplicateKey(f"attribute value {v!r} on rows "
                                   f"{names[v].row_id} and {g.row_id}")
        names[v] = g
    pairs = []
    for t in texts:
        if t in names:
            pairs.append((texts[t].id, names[t].id))
    pairs.sort(key=lambda p: p[0])
    return Correspondence(
        tuple(pairs),
        unmatched_objects=tuple(sorted(texts[t].id for t in texts if t not in names)),
        unmatched_glyphs=tuple(sorted(names[v].id for v in names if v not in texts)),
    )


def place(scene: Scene, correspondence: Correspondence, spec: JoinSpec) -> int:
    """Translate each paired glyph to its referent; rotations unchanged.

    center: glyph center on the object center. top: glyph bottom-center on
    the object's top face. front: glyph back face against the object's
    camera-facing face, offset by the clearance, standing on the object's
    bottom plane. The whole placement applies atomically.
    """
    objects = {o.id: o for o in scene.real_objects}
    moves: list[tuple[VirtualGlyph, Vec3]] = []
    for obj_id, glyph_id in correspondence.pairs:
        if obj_id not in objects:
            raise err.UnknownReference(f"real object {obj_id}")
        if glyph_id not in scene.glyphs:
            raise err.UnknownReference(f"glyph {glyph_id}")
        obj = objects[obj_id]
        glyph = scene.glyphs[glyph_id]
        ex, ey, ez = glyph_extents(glyph, scene.template(glyph.template_id))
        ox, oy, oz = obj.translation
        w, h, d = obj.extents
        if spec.anchor == "center":
            target = (ox, oy - ey / 2.0, oz)
        elif spec.anchor == "top":
            target = (ox, oy + h / 2.0, oz)
        else:
            target = _front_target(scene, obj, (ex, ey, ez), spec.clearance)
        moves.append((glyph, target))
    for glyph, target in moves:
        glyph.translation = target
    return len(moves)


def _front_target(scene: Scene, obj: RealObject, glyph_extent: Vec3, clearance: float) -> Vec3:
    """Bottom-center translation that puts the glyph's far face against the
    object's camera-facing face plus clearance, grounded at the object's
    bottom plane."""
    f = scene.view.forward
    axis = max(range(3), key=lambda a: abs(f[a]))
    sign = 1.0 if f[axis] >= 0.0 else -1.0
    ox, oy, oz = obj.translation
    half = (obj.extents[0] / 2.0, obj.extents[1] / 2.0, obj.extents[2] / 2.0)
    face = (ox, oy, oz)[axis] - sign * half[axis]
    target = [ox, oy - obj.extents[1] / 2.0, oz]
    # glyph spans [t - e/2, t + e/2] horizontally and [t, t + e] vertically
    if axis == 1:
        target[1] = face - sign * clearance - (glyph_extent[1] if sign > 0 else 0.0)
    else:
        target[axis] = face - sign * (clearance + glyph_extent[axis] / 2.0)
    return (target[0], target[1], target[2])
