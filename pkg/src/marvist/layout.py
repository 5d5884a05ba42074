"""Manual and semi-automatic layout interactions: plane-constrained moves,
picker placement, layout sketch, layout brush, copy layout, and stacking.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import errors as err
from .geometry import (
    CameraBasis,
    Vec3,
    dedupe_consecutive,
    point_at_arc_length,
    polyline_arc_lengths,
    vadd,
    vscale,
    vsub,
)
from .model import Collection, Scene, ViewPose, glyph_extents


@dataclass(frozen=True)
class Polyline3:
    vertices: tuple[Vec3, ...]

    def __post_init__(self):
        if len(self.vertices) < 2:
            raise err.DegeneratePath("polyline needs at least 2 distinct vertices")
        for a, b in zip(self.vertices, self.vertices[1:]):
            if a == b:
                raise err.DegeneratePath("consecutive polyline vertices coincide")
        if self.arc_lengths()[-1] <= 0.0:
            raise err.DegeneratePath("polyline has zero length")

    def arc_lengths(self) -> list[float]:
        return polyline_arc_lengths(self.vertices)


@dataclass(frozen=True)
class PoseSample:
    t: float
    pose: ViewPose


@dataclass(frozen=True)
class PoseTrace:
    samples: tuple[PoseSample, ...]

    def __post_init__(self):
        ts = [s.t for s in self.samples]
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise err.DegenerateTrace("trace timestamps must strictly increase")


def move_on_plane(scene: Scene, glyph_id: str, du: float, dv: float) -> None:
    """Translate a glyph on its horizontal support plane (y unchanged);
    stacking is re-evaluated for its collection afterwards."""
    g = scene.glyph(glyph_id)
    x, y, z = g.translation
    g.translation = (x + du, y, z + dv)
    owner = scene.collection_of(glyph_id)
    if owner is not None:
        stack_snap(scene, owner.id)


def place_at_pose(scene: Scene, target_id: str, pose: ViewPose, grip_distance: float) -> None:
    """Move a glyph or whole collection so its centroid sits grip_distance
    in front of the pose; collections move rigidly."""
    if grip_distance <= 0.0:
        raise err.NonPositiveDistance(f"grip distance must be > 0, got {grip_distance}")
    anchor = vadd(pose.position, vscale(pose.forward, grip_distance))
    if target_id in scene.glyphs:
        scene.glyphs[target_id].translation = anchor
        return
    if target_id in scene.collections:
        members = [scene.glyph(gid) for gid in scene.collections[target_id].member_ids]
        n = len(members)
        cx = sum(g.translation[0] for g in members) / n
        cy = sum(g.translation[1] for g in members) / n
        cz = sum(g.translation[2] for g in members) / n
        delta = vsub(anchor, (cx, cy, cz))
        for g in members:
            g.translation = vadd(g.translation, delta)
        return
    raise err.UnknownTarget(target_id)


def project_screen_path(
    screen_points: list[tuple[float, float]],
    frame,
    plane_y: float,
) -> Polyline3:
    """Raycast normalized screen points through the frame's camera onto the
    horizontal plane y = plane_y; samples that miss the plane are dropped."""
    cam = CameraBasis(frame.pose.position, frame.pose.forward, frame.pose.up,
                      frame.fov_h_deg, frame.fov_v_deg)
    hits = []
    for u, v in screen_points:
        p = cam.raycast_plane_y(u, v, plane_y)
        if p is not None:
            hits.append(p)
    hits = dedupe_consecutive(hits)
    if len(hits) < 2:
        raise err.DegeneratePath("screen path projects to fewer than 2 plane points")
    return Polyline3(tuple(hits))


def _distribute(scene: Scene, collection: Collection, line: Polyline3, keep_y: bool) -> None:
    members = [scene.glyph(gid) for gid in collection.member_ids]
    cum = line.arc_lengths()
    total = cum[-1]
    n = len(members)
    for k, g in enumerate(members):
        s = total * 0.5 if n == 1 else total * k / (n - 1)
        p = point_at_arc_length(line.vertices, cum, s)
        g.translation = (p[0], g.translation[1], p[2]) if keep_y else p


def layout_sketch(
    scene: Scene,
    collection_id: str,
    screen_points: list[tuple[float, float]],
    frame,
    plane_y: float,
) -> None:
    """Distribute the collection along a sketched screen path at equal arc
    lengths; only horizontal positions change."""
    c = scene.collection(collection_id)
    if not c.member_ids:
        raise err.EmptyCollection(collection_id)
    line = project_screen_path(screen_points, frame, plane_y)
    _distribute(scene, c, line, keep_y=True)


def layout_brush(scene: Scene, collection_id: str, trace: PoseTrace, reach: float) -> None:
    """Distribute the collection along the 3D path swept by the device,
    reach meters in front of each pose sample."""
    if reach <= 0.0:
        raise err.NonPositiveDistance(f"reach must be > 0, got {reach}")
    c = scene.collection(collection_id)
    if not c.member_ids:
        raise err.EmptyCollection(collection_id)
    if len(trace.samples) < 2:
        raise err.DegenerateTrace("trace needs at least 2 samples")
    points = dedupe_consecutive(
        vadd(s.pose.position, vscale(s.pose.forward, reach)) for s in trace.samples)
    if len(points) < 2:
        raise err.DegenerateTrace("trace sweeps no distance")
    _distribute(scene, c, Polyline3(tuple(points)), keep_y=False)


def copy_layout(
    scene: Scene,
    source_id: str,
    target_id: str,
    offset: Vec3 | None = None,
) -> list[str]:
    """Transfer the source collection's layout to the target by index order.

    Default offset is the widest source glyph's x extent so the copies sit
    alongside. Returns warnings (an all-zero offset overlaps exactly).
    """
    src = scene.collection(source_id)
    dst = scene.collection(target_id)
    if len(src.member_ids) != len(dst.member_ids):
        raise err.CardinalityMismatch(
            f"{len(src.member_ids)} source vs {len(dst.member_ids)} target glyphs")
    warnings = []
    if offset is None:
        width = max(
            glyph_extents(scene.glyph(gid), scene.template(scene.glyph(gid).template_id))[0]
            for gid in src.member_ids)
        offset = (width, 0.0, 0.0)
    elif offset == (0.0, 0.0, 0.0):
        warnings.append("zero offset: target overlaps the source exactly")
    for sgid, tgid in zip(src.member_ids, dst.member_ids):
        scene.glyph(tgid).translation = vadd(scene.glyph(sgid).translation, offset)
    return warnings


def stack_snap(scene: Scene, collection_id: str, snap_radius: float | None = None) -> None:
    """Align near-coincident members of a collection into vertical stacks.

    Members whose horizontal distance is below the snap radius (default:
    half the widest member's horizontal extent) cluster by single linkage;
    each cluster aligns to its lowest member's (x, z) and stacks bottom-up
    in (pre-snap y, row id) order, grounded at the lowest member's bottom.
    """
    c = scene.collection(collection_id)
    members = [scene.glyph(gid) for gid in c.member_ids]
    if not members:
        return
    extents = {g.id: glyph_extents(g, scene.template(g.template_id)) for g in members}
    if snap_radius is None:
        snap_radius = max(max(e[0], e[2]) for e in extents.values()) / 2.0

    # single-linkage clustering over horizontal (x, z) distance
    parent = {g.id: g.id for g in members}

    def find(a: str) -> str:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, a in enumerate(members):
        for b in members[i + 1:]:
            dx = a.translation[0] - b.translation[0]
            dz = a.translation[2] - b.translation[2]
            if (dx * dx + dz * dz) ** 0.5 < snap_radius:
                parent[find(a.id)] = find(b.id)

    clusters: dict[str, list] = {}
    for g in members:
        clusters.setdefault(find(g.id), []).append(g)

    for group in clusters.values():
        if len(group) < 2:
            continue
        base = min(group, key=lambda g: (g.translation[1], g.row_id))
        bx, _, bz = base.translation
        level = base.translation[1]
        for g in sorted(group, key=lambda g: (g.translation[1], g.row_id)):
            g.translation = (bx, level, bz)
            level += extents[g.id][1]
