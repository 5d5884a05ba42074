"""Small 3D helpers: vectors, quaternions, camera rays, polyline arc walks.

Vectors are plain (x, y, z) tuples; quaternions are (w, x, y, z) tuples.
Everything here is pure and allocation-light because the propagation paths
iterate it over every glyph in the scene.
"""
from __future__ import annotations

import math
from typing import Iterable, Sequence

from .errors import InvalidQuaternion

Vec3 = tuple[float, float, float]
Quat = tuple[float, float, float, float]

AXES: tuple[Vec3, Vec3, Vec3] = ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))

IDENTITY_QUAT: Quat = (1.0, 0.0, 0.0, 0.0)


def vadd(a: Vec3, b: Vec3) -> Vec3:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def vsub(a: Vec3, b: Vec3) -> Vec3:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def vscale(a: Vec3, s: float) -> Vec3:
    return (a[0] * s, a[1] * s, a[2] * s)


def dot(a: Vec3, b: Vec3) -> float:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def cross(a: Vec3, b: Vec3) -> Vec3:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def norm(a: Vec3) -> float:
    return math.sqrt(dot(a, a))


def normalize(a: Vec3) -> Vec3:
    n = norm(a)
    if n == 0.0:
        raise ValueError("cannot normalize zero vector")
    return (a[0] / n, a[1] / n, a[2] / n)


def vdist(a: Vec3, b: Vec3) -> float:
    return norm(vsub(a, b))


def normalize_quat(q: Sequence[float]) -> Quat:
    w, x, y, z = q
    n = math.sqrt(w * w + x * x + y * y + z * z)
    if n < 1e-12:
        raise InvalidQuaternion("near-zero quaternion")
    return (w / n, x / n, y / n, z / n)


def quat_mul(a: Quat, b: Quat) -> Quat:
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return (
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    )


def quat_about_axis(axis: Vec3, degrees: float) -> Quat:
    half = math.radians(degrees) / 2.0
    s = math.sin(half)
    return (math.cos(half), axis[0] * s, axis[1] * s, axis[2] * s)


class CameraBasis:
    """Right-handed camera frame derived from a view pose and FOV intrinsics.

    forward points into the scene; right = forward x up. Normalized screen
    coordinates are u (0 left, 1 right) and v (0 top, 1 bottom).
    """

    def __init__(self, position: Vec3, forward: Vec3, up: Vec3,
                 fov_h_deg: float, fov_v_deg: float):
        self.position = position
        self.forward = normalize(forward)
        self.right = normalize(cross(self.forward, up))
        self.up = normalize(cross(self.right, self.forward))
        self.tan_h = math.tan(math.radians(fov_h_deg) / 2.0)
        self.tan_v = math.tan(math.radians(fov_v_deg) / 2.0)

    def to_camera(self, p: Vec3) -> Vec3:
        """World point -> (right, up, depth-along-forward) coordinates."""
        d = vsub(p, self.position)
        return (dot(d, self.right), dot(d, self.up), dot(d, self.forward))

    def project(self, p: Vec3) -> tuple[float, float, float]:
        """World point -> (u, v, depth); u/v in [0,1] inside the frame."""
        x, y, depth = self.to_camera(p)
        if depth <= 0.0:
            return (math.nan, math.nan, depth)
        u = 0.5 + x / (2.0 * depth * self.tan_h)
        v = 0.5 - y / (2.0 * depth * self.tan_v)
        return (u, v, depth)

    def contains(self, p: Vec3) -> bool:
        u, v, depth = self.project(p)
        return depth > 0.0 and 0.0 <= u <= 1.0 and 0.0 <= v <= 1.0

    def ray_direction(self, u: float, v: float) -> Vec3:
        """Unnormalized ray direction through normalized screen point (u, v)."""
        d = self.forward
        d = vadd(d, vscale(self.right, (2.0 * u - 1.0) * self.tan_h))
        d = vadd(d, vscale(self.up, (1.0 - 2.0 * v) * self.tan_v))
        return d

    def raycast_plane_y(self, u: float, v: float, plane_y: float) -> Vec3 | None:
        """Intersect the (u, v) screen ray with the horizontal plane y = plane_y."""
        d = self.ray_direction(u, v)
        if abs(d[1]) < 1e-12:
            return None
        t = (plane_y - self.position[1]) / d[1]
        if t <= 0.0:
            return None
        return vadd(self.position, vscale(d, t))


def polyline_arc_lengths(points: Sequence[Vec3]) -> list[float]:
    """Cumulative arc length at each vertex, starting at 0."""
    acc = [0.0]
    for a, b in zip(points, points[1:]):
        acc.append(acc[-1] + vdist(a, b))
    return acc


def point_at_arc_length(points: Sequence[Vec3], cum: Sequence[float], s: float) -> Vec3:
    """Point at arc-length parameter s along the polyline (clamped to ends)."""
    total = cum[-1]
    if s <= 0.0:
        return points[0]
    if s >= total:
        return points[-1]
    # binary search for the segment containing s
    lo, hi = 0, len(cum) - 1
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if cum[mid] <= s:
            lo = mid
        else:
            hi = mid
    seg = cum[hi] - cum[lo]
    t = (s - cum[lo]) / seg
    a, b = points[lo], points[hi]
    return (a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t, a[2] + (b[2] - a[2]) * t)


def dedupe_consecutive(points: Iterable[Vec3], eps: float = 0.0) -> list[Vec3]:
    """Drop consecutive points closer than eps (exact duplicates when eps=0)."""
    out: list[Vec3] = []
    for p in points:
        if out and vdist(out[-1], p) <= eps:
            continue
        out.append(p)
    return out
