"""Visual channels, channel families, and the per-data-type effectiveness ranking."""
from __future__ import annotations

from enum import Enum


class AttributeType(str, Enum):
    QUANTITATIVE = "quantitative"
    ORDINAL = "ordinal"
    NOMINAL = "nominal"


class VisualChannel(str, Enum):
    LENGTH_X = "length_x"
    LENGTH_Y = "length_y"
    LENGTH_Z = "length_z"
    AREA_TOP = "area_top"        # spans x-z
    AREA_LEFT = "area_left"      # spans y-z
    AREA_FRONT = "area_front"    # spans x-y
    VOLUME = "volume"
    ANGLE_PHI = "angle_phi"      # about y
    ANGLE_THETA = "angle_theta"  # about x
    ANGLE_PSI = "angle_psi"      # about z
    COLOR_HUE = "color_hue"
    COLOR_LUMINANCE = "color_luminance"
    COLOR_SATURATION = "color_saturation"
    OPACITY = "opacity"


C = VisualChannel

LENGTH_CHANNELS = (C.LENGTH_X, C.LENGTH_Y, C.LENGTH_Z)
AREA_CHANNELS = (C.AREA_TOP, C.AREA_LEFT, C.AREA_FRONT)
SIZE_CHANNELS = LENGTH_CHANNELS + AREA_CHANNELS + (C.VOLUME,)
ANGLE_CHANNELS = (C.ANGLE_PHI, C.ANGLE_THETA, C.ANGLE_PSI)
OPTICAL_CHANNELS = (C.COLOR_HUE, C.COLOR_LUMINANCE, C.COLOR_SATURATION, C.OPACITY)
NORMALIZED_CHANNELS = (C.COLOR_LUMINANCE, C.COLOR_SATURATION, C.OPACITY)

# axis index (0=x, 1=y, 2=z) controlled by each geometric channel
LENGTH_AXIS = {C.LENGTH_X: 0, C.LENGTH_Y: 1, C.LENGTH_Z: 2}
AREA_AXES = {C.AREA_TOP: (0, 2), C.AREA_LEFT: (1, 2), C.AREA_FRONT: (0, 1)}
ANGLE_AXIS = {C.ANGLE_PHI: 1, C.ANGLE_THETA: 0, C.ANGLE_PSI: 2}

# Permitted channels per data type, ordered by perceptual effectiveness.
# Families expand in fixed axis order (x, y, z / phi, theta, psi /
# top, left, front / luminance, saturation) for determinism.
CHANNEL_RANKING: dict[AttributeType, tuple[VisualChannel, ...]] = {
    AttributeType.QUANTITATIVE: (
        C.LENGTH_X, C.LENGTH_Y, C.LENGTH_Z,
        C.ANGLE_PHI, C.ANGLE_THETA, C.ANGLE_PSI,
        C.AREA_TOP, C.AREA_LEFT, C.AREA_FRONT,
        C.COLOR_LUMINANCE, C.COLOR_SATURATION,
        C.VOLUME,
    ),
    AttributeType.ORDINAL: (
        C.COLOR_LUMINANCE, C.COLOR_SATURATION,
        C.LENGTH_X, C.LENGTH_Y, C.LENGTH_Z,
        C.ANGLE_PHI, C.ANGLE_THETA, C.ANGLE_PSI,
        C.AREA_TOP, C.AREA_LEFT, C.AREA_FRONT,
        C.VOLUME,
    ),
    AttributeType.NOMINAL: (C.COLOR_HUE,),
}

# family rank within each ranking, used for the subsequence property:
# restricting the ranked output to any subset never reorders families.
_FAMILY_OF = {}
for ch in LENGTH_CHANNELS:
    _FAMILY_OF[ch] = "length"
for ch in AREA_CHANNELS:
    _FAMILY_OF[ch] = "area"
for ch in ANGLE_CHANNELS:
    _FAMILY_OF[ch] = "angle"
_FAMILY_OF[C.VOLUME] = "volume"
_FAMILY_OF[C.COLOR_HUE] = "hue"
_FAMILY_OF[C.COLOR_LUMINANCE] = "optical"
_FAMILY_OF[C.COLOR_SATURATION] = "optical"
_FAMILY_OF[C.OPACITY] = "optical"


def family(channel: VisualChannel) -> str:
    return _FAMILY_OF[channel]


def is_size(channel: VisualChannel) -> bool:
    return channel in SIZE_CHANNELS


def is_length(channel: VisualChannel) -> bool:
    return channel in LENGTH_CHANNELS


def is_area(channel: VisualChannel) -> bool:
    return channel in AREA_CHANNELS


def is_angle(channel: VisualChannel) -> bool:
    return channel in ANGLE_CHANNELS


def is_normalized(channel: VisualChannel) -> bool:
    return channel in NORMALIZED_CHANNELS
