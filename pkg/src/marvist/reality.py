"""Simulated AR environment: ground-truth real objects, camera frames, and a
seeded noisy detector standing in for platform object detection.

Detection is driven by ground truth plus optional Gaussian noise so every
run is reproducible; extraction derives visual-channel values from the
detected bounding boxes the same way a vision stack would approximate them.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace

from . import errors as err
from .geometry import IDENTITY_QUAT, CameraBasis, Quat, Vec3, normalize_quat
from .model import ViewPose

SPHERE_SHAPE_FACTOR = math.pi / 6.0


@dataclass(frozen=True)
class TextRegion:
    text: str
    area: float  # m^2


@dataclass(frozen=True)
class RealObject:
    id: str
    label: str
    translation: Vec3                     # bounding-box center
    rotation: Quat = IDENTITY_QUAT
    extents: Vec3 = (0.1, 0.1, 0.1)       # (w, h, d) > 0
    text_regions: tuple[TextRegion, ...] = ()
    surface_luminance: float = 0.5
    shape_factor: float = 1.0             # bbox-volume correction (sphere: pi/6)
    detected: bool = False
    detection_index: int = -1

    def __post_init__(self):
        if min(self.extents) <= 0.0:
            raise err.DomainViolation(f"object {self.id}: non-positive extents")
        object.__setattr__(self, "rotation", normalize_quat(self.rotation))


@dataclass(frozen=True)
class CameraFrame:
    pose: ViewPose
    luminance: tuple[tuple[float, ...], ...]  # rows x cols, values in [0, 1]
    light_estimate: float = 1.0
    fov_h_deg: float = 60.0
    fov_v_deg: float = 45.0

    def __post_init__(self):
        if not self.luminance or not self.luminance[0]:
            raise err.EmptyFrame("camera frame has no luminance samples")
        for row in self.luminance:
            if len(row) != len(self.luminance[0]):
                raise err.DomainViolation("ragged luminance grid")
            for s in row:
                if not 0.0 <= s <= 1.0:
                    raise err.DomainViolation(f"luminance sample {s} outside [0, 1]")


@dataclass(frozen=True)
class DetectionNoise:
    extent_relative_sigma: float = 0.0
    position_sigma_m: float = 0.0
    drop_probability: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.extent_relative_sigma < 0 or self.position_sigma_m < 0:
            raise err.DomainViolation("noise sigmas must be >= 0")
        if not 0.0 <= self.drop_probability < 1.0:
            raise err.DomainViolation("drop probability must be in [0, 1)")


NO_NOISE = DetectionNoise()


@dataclass(frozen=True)
class ExtractedChannels:
    values: dict[str, float]
    text: str | None = None

    def get(self, name: str):
        if name == "text":
            return self.text
        return self.values.get(name)

    def available(self) -> list[str]:
        names = sorted(self.values)
        if self.text is not None:
            names.append("text")
        return names


# channel-name dimension classes used for sync compatibility
LENGTH_KEYS = ("length_x", "length_y", "length_z")
AREA_KEYS = ("area_top", "area_left", "area_front")


def detect(
    ground_truth: list[RealObject],
    frame: CameraFrame,
    noise: DetectionNoise = NO_NOISE,
) -> list[RealObject]:
    """Detect every ground-truth object whose center lies inside the view
    frustum, unless dropped by noise. Detected copies carry perturbed
    extents/positions and detection indices in ground-truth file order."""
    cam = CameraBasis(frame.pose.position, frame.pose.forward, frame.pose.up,
                      frame.fov_h_deg, frame.fov_v_deg)
    rng = random.Random(noise.seed)
    detected: list[RealObject] = []
    for obj in ground_truth:
        drop = rng.random() < noise.drop_probability
        offsets = [rng.gauss(0.0, noise.position_sigma_m) if noise.position_sigma_m else 0.0
                   for _ in range(3)]
        factors = [abs(1.0 + rng.gauss(0.0, noise.extent_relative_sigma))
                   if noise.extent_relative_sigma else 1.0
                   for _ in range(3)]
        if drop or not cam.contains(obj.translation):
            continue
        t = obj.translation
        e = obj.extents
        detected.append(replace(
            obj,
            translation=(t[0] + offsets[0], t[1] + offsets[1], t[2] + offsets[2]),
            extents=(e[0] * factors[0], e[1] * factors[1], e[2] * factors[2]),
            detected=True,
            detection_index=len(detected),
        ))
    return detected


def extract_channels(obj: RealObject) -> ExtractedChannels:
    """Visual-channel values estimated from a detected object's bounding box.

    Lengths are the (w, h, d) extents mapped onto the x/y/z axes, areas are
    the three face products, and the volume is the bbox volume corrected by
    the object's shape factor. The text channel carries the region with the
    largest area; earlier regions win ties.
    """
    if not obj.detected:
        raise err.NotDetected(f"object {obj.id} has not been detected")
    w, h, d = obj.extents
    values = {
        "position_x": obj.translation[0],
        "position_y": obj.translation[1],
        "position_z": obj.translation[2],
        "length_x": w,
        "length_y": h,
        "length_z": d,
        "area_front": w * h,
        "area_left": h * d,
        "area_top": w * d,
        "volume": w * h * d * obj.shape_factor,
    }
    text = None
    if obj.text_regions:
        best = max(obj.text_regions, key=lambda r: r.area)
        first = next(r for r in obj.text_regions if r.area == best.area)
        text = first.text
    return ExtractedChannels(values, text)


def channel_dimension(name: str) -> str:
    """Dimension class of an extracted or visual channel name."""
    if name in LENGTH_KEYS:
        return "length"
    if name in AREA_KEYS:
        return "area"
    if name == "volume":
        return "volume"
    if name.startswith("position"):
        return "position"
    if name == "text":
        return "text"
    return "other"
