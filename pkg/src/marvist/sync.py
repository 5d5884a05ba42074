"""Visual scales synchronization: assign a measured real-object channel value
to a virtual glyph and, when the channel is data-bound, inversely recompute
the mapping scale so the anchor glyph matches the measurement exactly while
every other bound glyph keeps its data ratio.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import errors as err
from . import mapping as mp
from .channels import VisualChannel, is_area, is_length
from .model import Scene
from .reality import channel_dimension, extract_channels


@dataclass(frozen=True)
class SyncRequest:
    real_object_id: str
    source_channel: str          # name in ExtractedChannels
    target_glyph_id: str
    target_channel: VisualChannel


@dataclass(frozen=True)
class SyncOutcome:
    mode: str                    # "bound" or "unbound"
    value: float                 # measured real-object channel value
    new_scale: float | None      # bound mode only
    touched_glyphs: int


def _target_dimension(channel: VisualChannel) -> str:
    if is_length(channel):
        return "length"
    if is_area(channel):
        return "area"
    if channel is VisualChannel.VOLUME:
        return "volume"
    return "other"


def sync(scene: Scene, req: SyncRequest) -> SyncOutcome:
    """Apply one synchronization request to the scene.

    Unbound target channel: the measured value is assigned to every glyph of
    the anchor's template. Bound: the mapping scale becomes value/anchor-data
    and is propagated to all bound glyphs across templates.
    """
    obj = next((o for o in scene.real_objects if o.id == req.real_object_id), None)
    if obj is None:
        raise err.UnknownObject(req.real_object_id)
    if not obj.detected:
        raise err.NotDetected(f"object {obj.id} has not been detected")
    glyph = scene.glyph(req.target_glyph_id)

    src_dim = channel_dimension(req.source_channel)
    tgt_dim = _target_dimension(req.target_channel)
    if tgt_dim == "other" or src_dim != tgt_dim:
        raise err.IncompatibleChannels(
            f"{req.source_channel} ({src_dim}) cannot drive "
            f"{req.target_channel.value} ({tgt_dim})")

    extracted = extract_channels(obj)
    value = extracted.get(req.source_channel)
    if value is None:
        raise err.IncompatibleChannels(f"object {obj.id} has no {req.source_channel}")
    if value <= 0.0:
        raise err.NonPositiveSourceValue(f"{req.source_channel} of {obj.id} is {value}")

    bound = mp.mappings_on_channel(scene, req.target_channel)
    if not bound:
        n = 0
        for g in scene.glyphs.values():
            if g.template_id == glyph.template_id:
                g.channel_values[req.target_channel] = value
                n += 1
        return SyncOutcome("unbound", value, None, n)

    m = bound[0]
    anchor_value = scene.glyph_row_value(glyph, m.attribute)
    if anchor_value is None:
        raise err.ZeroAnchorValue(
            f"glyph {glyph.id} carries no value for {m.attribute}")
    attr = scene.table.attribute(m.attribute)
    x = attr.numeric(anchor_value)
    if x == 0.0:
        raise err.ZeroAnchorValue(f"anchor data value for {m.attribute} is 0")
    mp.set_scale(scene, m, value / x)
    touched = len(scene.glyphs_with_attribute(m.attribute))
    return SyncOutcome("bound", value, m.scale, touched)
