"""Attribute-to-channel bindings: encoding functions, global propagation,
effectiveness ranking, and channel recommendation.

Size and angle mappings are ratio (zero-intercept) linear so data ratios
survive scale synchronization; optical channels are normalized affine with a
visible baseline floor.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import errors as err
from . import nudging
from .channels import (
    AREA_AXES,
    AREA_CHANNELS,
    CHANNEL_RANKING,
    LENGTH_AXIS,
    LENGTH_CHANNELS,
    AttributeType,
    VisualChannel,
    is_angle,
    is_normalized,
    is_size,
)
from .geometry import AXES, dot
from .model import DataAttribute, GlyphTemplate, Scene, ViewPose

DEFAULT_BASELINE = 0.15
DEFAULT_ANGLE_SPAN = 270.0

C = VisualChannel


@dataclass
class VisualMapping:
    attribute: str
    channel: VisualChannel
    scale: float = 1.0
    baseline: float = DEFAULT_BASELINE   # normalized channels only
    palette_seed: int = 0                # hue only

    def __post_init__(self):
        if self.scale <= 0.0:
            raise err.NonPositiveFactor(f"scale must be > 0, got {self.scale}")


def encode(mapping: VisualMapping, attr: DataAttribute, value) -> float:
    """Channel value for one data value under a mapping.

    Size channels: v = scale * x (meters / m^2 / m^3). Angle channels:
    v = scale * x degrees wrapped into [0, 360). Normalized channels:
    v = clamp(baseline + scale * (x - min)/(max - min), 0, 1), degenerate
    domains map to position 0.5. Hue: category k of K gets
    (palette_seed + k * 360/K) mod 360.
    """
    ch = mapping.channel
    if ch is C.COLOR_HUE:
        if attr.kind is AttributeType.QUANTITATIVE:
            raise err.NominalChannelUnsupported(
                "color_hue encodes categories; bind it to a nominal attribute")
        if value not in attr.domain:
            raise err.DomainViolation(f"{value!r} outside domain of {attr.name}")
        k = attr.category_index(value)
        return (mapping.palette_seed + k * 360.0 / len(attr.domain)) % 360.0

    if not attr.contains(value) or value is None:
        raise err.DomainViolation(f"{value!r} outside domain of {attr.name}")
    x = attr.numeric(value)

    if is_size(ch):
        if x < 0.0:
            raise err.NegativeSizeDomain(f"size channel with negative value {x}")
        return mapping.scale * x
    if is_angle(ch):
        return (mapping.scale * x) % 360.0
    if is_normalized(ch):
        if attr.kind is AttributeType.QUANTITATIVE:
            lo, hi = attr.domain
            t = 0.5 if lo == hi else (x - lo) / (hi - lo)
        else:
            hi = len(attr.domain) - 1
            t = 0.5 if hi == 0 else x / hi
        return min(1.0, max(0.0, mapping.baseline + mapping.scale * t))
    raise err.DomainViolation(f"unsupported channel {ch}")


def _base_magnitude(template: GlyphTemplate, channel: VisualChannel) -> float:
    bx, by, bz = template.base_extents
    if channel in LENGTH_AXIS:
        return (bx, by, bz)[LENGTH_AXIS[channel]]
    if channel in AREA_AXES:
        a, b = AREA_AXES[channel]
        return (bx, by, bz)[a] * (bx, by, bz)[b]
    return bx * by * bz


def default_scale(scene: Scene, attr: DataAttribute, channel: VisualChannel) -> float:
    """Initial scale so the maximum data value fills the template's base
    extent (size), 270 degrees (angle), or the full normalized range."""
    if is_normalized(channel) or channel is C.COLOR_HUE:
        return 1.0
    x_max = attr.numeric_max()
    if x_max <= 0.0:
        return 1.0
    if is_angle(channel):
        return DEFAULT_ANGLE_SPAN / x_max
    bound = scene.glyphs_with_attribute(attr.name)
    if bound:
        anchor = min(bound, key=lambda g: g.row_id)
        template = scene.template(anchor.template_id)
        return _base_magnitude(template, channel) / x_max
    return 1.0 / x_max


def find_mapping(scene: Scene, attribute: str, channel: VisualChannel) -> VisualMapping | None:
    for m in scene.mappings:
        if m.attribute == attribute and m.channel is channel:
            return m
    return None


def mappings_on_channel(scene: Scene, channel: VisualChannel) -> list[VisualMapping]:
    return [m for m in scene.mappings if m.channel is channel]


def propagate(scene: Scene, mapping: VisualMapping) -> int:
    """Re-encode the mapping onto every glyph whose row carries the
    attribute, across all templates. Returns the number touched."""
    attr = scene.table.attribute(mapping.attribute)
    col = scene.table.column_index(mapping.attribute)
    rows = scene.table._rows_by_id
    n = 0
    for g in scene.glyphs.values():
        v = rows[g.row_id].values[col]
        if v is None:
            continue
        g.channel_values[mapping.channel] = encode(mapping, attr, v)
        n += 1
    return n


def bind(
    scene: Scene,
    attribute: str,
    channel: VisualChannel,
    scale: float | None = None,
    palette_seed: int = 0,
) -> tuple[VisualMapping, "nudging.ValidationReport"]:
    """Create a mapping and propagate it to all carrying glyphs.

    The attached validation report is advisory and never blocks the bind.
    """
    attr = scene.table.attribute(attribute)
    if find_mapping(scene, attribute, channel) is not None:
        raise err.DuplicateMapping(f"{attribute} -> {channel.value} already bound")
    if attr.kind is AttributeType.NOMINAL and channel is not C.COLOR_HUE:
        raise err.NominalChannelUnsupported(
            f"nominal attribute {attribute} supports only color_hue")
    if channel is C.COLOR_HUE and attr.kind is AttributeType.QUANTITATIVE:
        raise err.NominalChannelUnsupported(
            "color_hue encodes categories; bind it to a nominal attribute")

    report = nudging.validate_all(scene, channel, attribute)
    mapping = VisualMapping(
        attribute=attribute,
        channel=channel,
        scale=scale if scale is not None else default_scale(scene, attr, channel),
        palette_seed=palette_seed,
    )
    propagate(scene, mapping)
    scene.mappings.append(mapping)
    _record_diagnostics(scene, report)
    return mapping, report


def modify_scale(
    scene: Scene,
    attribute: str,
    channel: VisualChannel,
    factor: float,
) -> tuple[VisualMapping, "nudging.ValidationReport"]:
    """Multiply the mapping's scale by factor and re-propagate.

    Like bind, a modification re-validates the encoding; the report is
    advisory and the rescale always lands.
    """
    if factor is None or factor <= 0.0:
        raise err.NonPositiveFactor(f"factor must be > 0, got {factor}")
    mapping = find_mapping(scene, attribute, channel)
    if mapping is None:
        raise err.UnknownMapping(f"{attribute} -> {channel.value}")
    mapping.scale *= factor
    propagate(scene, mapping)
    report = nudging.validate_all(scene, channel, attribute)
    _record_diagnostics(scene, report)
    return mapping, report


def unbind(scene: Scene, attribute: str, channel: VisualChannel) -> None:
    """Remove the mapping and clear its channel value from every bound glyph."""
    mapping = find_mapping(scene, attribute, channel)
    if mapping is None:
        raise err.UnknownMapping(f"{attribute} -> {channel.value}")
    scene.mappings.remove(mapping)
    # the channel may still be fed by another attribute's mapping
    survivor = mappings_on_channel(scene, channel)
    for g in scene.glyphs.values():
        g.channel_values.pop(channel, None)
    for m in survivor:
        propagate(scene, m)


def set_scale(scene: Scene, mapping: VisualMapping, new_scale: float) -> None:
    if new_scale <= 0.0:
        raise err.NonPositiveFactor(f"scale must be > 0, got {new_scale}")
    mapping.scale = new_scale
    propagate(scene, mapping)


@dataclass(frozen=True)
class RankedChannel:
    channel: VisualChannel
    valid: bool
    reasons: tuple[str, ...]   # failing rule names with messages


def _length_depth(channel: VisualChannel, view: ViewPose) -> float:
    return abs(dot(AXES[LENGTH_AXIS[channel]], view.forward))


def ranked_channels(
    scene: Scene,
    attr: DataAttribute,
    view: ViewPose | None = None,
) -> list[RankedChannel]:
    """Permitted channels for the attribute type, ordered by effectiveness.

    Length-family ties break by ascending depth relative to the view, then
    by fixed axis order. Each entry carries the context-free nudging
    verdicts (orientation and separability).
    """
    view = view or scene.view
    order = list(CHANNEL_RANKING[attr.kind])
    lengths = sorted(
        (ch for ch in order if ch in LENGTH_CHANNELS),
        key=lambda ch: (_length_depth(ch, view), LENGTH_AXIS[ch]),
    )
    it = iter(lengths)
    order = [next(it) if ch in LENGTH_CHANNELS else ch for ch in order]

    out = []
    for ch in order:
        verdicts = []
        if ch in LENGTH_CHANNELS or ch in AREA_CHANNELS:
            verdicts.append(nudging.validate_orientation(ch, view))
        if nudging.separability_applicable(ch):
            verdicts.append(nudging.validate_separability(ch, attr.name, scene.mappings))
        reasons = tuple(f"{v.rule}: {v.message}" for v in verdicts if not v.valid)
        out.append(RankedChannel(ch, not reasons, reasons))
    return out


def recommend(scene: Scene, attr: DataAttribute, view: ViewPose | None = None) -> RankedChannel:
    """Most effective valid channel; falls back to the top-ranked entry
    (flagged invalid) when nothing passes, because nudging never prohibits."""
    ranking = ranked_channels(scene, attr, view)
    for entry in ranking:
        if entry.valid:
            return entry
    return ranking[0]


def _record_diagnostics(scene: Scene, report: "nudging.ValidationReport") -> None:
    scene.diagnostics = [
        r for r in scene.diagnostics
        if (r.attribute, r.channel) != (report.attribute, report.channel)
    ]
    scene.diagnostics.append(report)
