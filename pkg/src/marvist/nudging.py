"""Context-aware validation: orientation, luminance contrast, rotational
symmetry, and separability, rolled into an advisory report.

The verdicts guide the user twofold (what to do via the ranked
recommendation, what not to do via warnings) and never block an edit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from . import errors as err
from .channels import (
    ANGLE_AXIS,
    AREA_AXES,
    AREA_CHANNELS,
    LENGTH_AXIS,
    LENGTH_CHANNELS,
    OPTICAL_CHANNELS,
    SIZE_CHANNELS,
    VisualChannel,
    is_angle,
)
from .geometry import AXES, CameraBasis, dot
from .model import (
    GlyphTemplate,
    Scene,
    ViewPose,
    VirtualGlyph,
    glyph_extents,
)

C = VisualChannel

# a length is invalid when more depth-aligned than screen-aligned
DEPTH_THRESHOLD = math.cos(math.radians(45.0))
CONTRAST_THRESHOLD = 3.0
SYMMETRY_THRESHOLD = 4
FLARE = 0.05


@dataclass(frozen=True)
class Verdict:
    rule: str          # orientation | contrast | symmetry | separability
    valid: bool
    metric: float      # depth fraction, contrast ratio, symmetry order, or 0
    message: str


@dataclass(frozen=True)
class ValidationReport:
    channel: VisualChannel
    attribute: str
    verdicts: tuple[Verdict, ...]

    @property
    def overall_valid(self) -> bool:
        return all(v.valid for v in self.verdicts)

    def failures(self) -> tuple[Verdict, ...]:
        return tuple(v for v in self.verdicts if not v.valid)


def _fmt(x: float) -> str:
    return format(x, ".6g")


def validate_orientation(channel: VisualChannel, view: ViewPose) -> Verdict:
    """Size lengths/areas are ineffective when depth-aligned with the view.

    A length is invalid iff |axis . forward| exceeds cos 45deg; an area is
    invalid iff either spanning axis fails that test. Volume is exempt (it
    always has a depth component and is already ranked last).
    """
    if channel in LENGTH_AXIS:
        axes = (LENGTH_AXIS[channel],)
    elif channel in AREA_AXES:
        axes = AREA_AXES[channel]
    else:
        raise err.InapplicableRule(f"orientation rule does not cover {channel.value}")
    depth = max(abs(dot(AXES[a], view.forward)) for a in axes)
    valid = depth <= DEPTH_THRESHOLD
    state = "screen-aligned" if valid else "depth-aligned"
    return Verdict("orientation", valid, depth,
                   f"{channel.value} depth component {_fmt(depth)} is {state}")


def validate_symmetry(channel: VisualChannel, template: GlyphTemplate) -> Verdict:
    """Angle channels lose meaning on rotationally symmetric models
    (order >= 4: a quarter turn maps the model onto itself)."""
    if not is_angle(channel):
        raise err.InapplicableRule(f"symmetry rule does not cover {channel.value}")
    axis = ANGLE_AXIS[channel]
    # symmetry_orders is stored (about y, about x, about z)
    order = template.symmetry_orders[{1: 0, 0: 1, 2: 2}[axis]]
    valid = order < SYMMETRY_THRESHOLD
    return Verdict("symmetry", valid, float(order),
                   f"template {template.id} rotational symmetry order {order} about "
                   f"{'yxz'[{1: 0, 0: 1, 2: 2}[axis]]}")


def separability_applicable(channel: VisualChannel) -> bool:
    return channel in SIZE_CHANNELS or channel in (C.COLOR_LUMINANCE, C.OPACITY)


def validate_separability(channel: VisualChannel, attribute: str, mappings) -> Verdict:
    """Flag subsumption and perceptual integration against channels already
    bound to other attributes; double encoding of one attribute is exempt."""
    others = [m for m in mappings if m.attribute != attribute]
    problems: list[str] = []

    bound_lengths = {m.channel for m in others if m.channel in LENGTH_CHANNELS}
    bound_areas = {m.channel for m in others if m.channel in AREA_CHANNELS}
    bound_volume = any(m.channel is C.VOLUME for m in others)

    if channel in AREA_AXES:
        contained = [ch for ch in bound_lengths if LENGTH_AXIS[ch] in AREA_AXES[channel]]
        if contained:
            problems.append(f"subsumes bound {', '.join(sorted(ch.value for ch in contained))}")
    if channel in LENGTH_AXIS:
        covering = [ch for ch in bound_areas if LENGTH_AXIS[channel] in AREA_AXES[ch]]
        if covering:
            problems.append(f"subsumed by bound {', '.join(sorted(ch.value for ch in covering))}")
    if channel is C.VOLUME and (bound_lengths or bound_areas):
        problems.append("volume subsumes bound length/area channels")
    if channel in LENGTH_AXIS or channel in AREA_AXES:
        if bound_volume:
            problems.append("subsumed by bound volume")
    if channel in LENGTH_AXIS and bound_lengths:
        problems.append(
            "integrates with bound "
            + ", ".join(sorted(ch.value for ch in bound_lengths)))
    if channel is C.COLOR_LUMINANCE and any(m.channel is C.OPACITY for m in others):
        problems.append("luminance integrates with bound opacity")
    if channel is C.OPACITY and any(m.channel is C.COLOR_LUMINANCE for m in others):
        problems.append("opacity integrates with bound color_luminance")

    if problems:
        return Verdict("separability", False, 0.0,
                       f"{channel.value} vs other attributes: " + "; ".join(problems))
    return Verdict("separability", True, 0.0, f"{channel.value} is separable")


def validate_contrast(
    glyph: VirtualGlyph,
    template: GlyphTemplate,
    frame,
    light_estimate: float,
) -> Verdict:
    """Luminance contrast between the glyph and its real background.

    The glyph luminance is its material luminance dimmed by the light
    estimate; the surround is the mean frame luminance in a ring around the
    projected bounding rectangle (dilated by half its diagonal per side).
    Valid iff (max + 0.05)/(min + 0.05) >= 3. The message carries the
    sigma/mu RMS contrast over the union region, with the glyph standing in
    for the samples it occludes.
    """
    if frame is None or not frame.luminance or not frame.luminance[0]:
        raise err.EmptyFrame("camera frame has no luminance samples")
    rows = len(frame.luminance)
    cols = len(frame.luminance[0])

    cam = CameraBasis(frame.pose.position, frame.pose.forward, frame.pose.up,
                      frame.fov_h_deg, frame.fov_v_deg)
    ex, ey, ez = glyph_extents(glyph, template)
    tx, ty, tz = glyph.translation
    corners = [
        (tx + sx * ex / 2.0, ty + sy, tz + sz * ez / 2.0)
        for sx in (-1.0, 1.0) for sy in (0.0, ey) for sz in (-1.0, 1.0)
    ]
    us, vs = [], []
    for corner in corners:
        u, v, depth = cam.project(corner)
        if depth <= 0.0:
            raise err.FootprintOutOfFrame("glyph behind the camera plane")
        us.append(u)
        vs.append(v)
    u0, u1 = min(us), max(us)
    v0, v1 = min(vs), max(vs)
    if u1 < 0.0 or u0 > 1.0 or v1 < 0.0 or v0 > 1.0:
        raise err.FootprintOutOfFrame("glyph footprint projects outside the frame")

    diag = math.hypot(u1 - u0, v1 - v0)
    pad = 0.5 * diag
    o0, o1 = u0 - pad, u1 + pad
    p0, p1 = v0 - pad, v1 + pad

    mu_g = template.material_luminance * light_estimate
    ring: list[float] = []
    union: list[float] = []
    for i in range(rows):
        v = (i + 0.5) / rows
        if not (p0 <= v <= p1):
            continue
        for j in range(cols):
            u = (j + 0.5) / cols
            if not (o0 <= u <= o1):
                continue
            inner = u0 <= u <= u1 and v0 <= v <= v1
            sample = frame.luminance[i][j]
            union.append(mu_g if inner else sample)
            if not inner:
                ring.append(sample)
    if not ring:
        raise err.FootprintOutOfFrame("no surround samples around the glyph footprint")

    mu_s = sum(ring) / len(ring)
    ratio = (max(mu_g, mu_s) + FLARE) / (min(mu_g, mu_s) + FLARE)
    mean_u = sum(union) / len(union)
    if mean_u > 0.0:
        var = sum((x - mean_u) ** 2 for x in union) / len(union)
        rms = math.sqrt(var) / mean_u
    else:
        rms = 0.0
    valid = ratio >= CONTRAST_THRESHOLD
    return Verdict("contrast", valid, ratio,
                   f"contrast ratio {_fmt(ratio)} vs 3:1 minimum (rms {_fmt(rms)})")


def _representative_glyph(scene: Scene, attribute: str) -> VirtualGlyph | None:
    carrying = scene.glyphs_with_attribute(attribute)
    if not carrying:
        return None
    return min(carrying, key=lambda g: g.row_id)


def validate_all(
    scene: Scene,
    channel: VisualChannel,
    attribute: str,
    glyph: VirtualGlyph | None = None,
) -> ValidationReport:
    """Run every applicable rule for the encoding; inapplicable rules are
    omitted and sub-rule errors become flagged verdicts, not failures."""
    verdicts: list[Verdict] = []
    if channel in LENGTH_CHANNELS or channel in AREA_CHANNELS:
        verdicts.append(validate_orientation(channel, scene.view))
    if glyph is None:
        glyph = _representative_glyph(scene, attribute)
    if is_angle(channel) and glyph is not None:
        verdicts.append(validate_symmetry(channel, scene.template(glyph.template_id)))
    if channel in OPTICAL_CHANNELS and glyph is not None and scene.frame is not None:
        try:
            verdicts.append(validate_contrast(
                glyph, scene.template(glyph.template_id), scene.frame,
                scene.light_estimate))
        except err.EngineError as e:
            verdicts.append(Verdict("contrast", False, 0.0, f"{e.code}: {e}"))
    if separability_applicable(channel):
        verdicts.append(validate_separability(channel, attribute, scene.mappings))
    return ValidationReport(channel, attribute, tuple(verdicts))
