"""Single-writer authoring engine.

All mutations funnel through one lock; every mutating operation snapshots
the scene first so failures roll back atomically and undo/redo restore
byte-identical states. Snapshots handed out are deep copies and safe to
share across threads.
"""
from __future__ import annotations

import threading
from typing import Callable, Sequence

from . import autolayout as al
from . import errors as err
from . import layout as lo
from . import mapping as mp
from . import nudging
from . import persistence as ps
from . import sync as sc
from .channels import VisualChannel
from .gallery import fetch_template
from .model import (
    Row,
    Scene,
    ViewPose,
    group_collection,
    instantiate_glyphs,
)
from .reality import DetectionNoise, NO_NOISE, RealObject, detect

DEFAULT_GRID_SPACING = 0.05
DEFAULT_UNDO_LIMIT = 64


class Engine:
    def __init__(self, undo_limit: int = DEFAULT_UNDO_LIMIT):
        self.scene = Scene()
        self.ground_truth: list[RealObject] = []
        self.undo_limit = undo_limit
        self.last_report: nudging.ValidationReport | None = None
        self.events: list[str] = []
        self._undo: list[Scene] = []
        self._redo: list[Scene] = []
        self._lock = threading.RLock()

    # -- single-writer plumbing ---------------------------------------------
    def _mutate(self, fn: Callable):
        with self._lock:
            before = self.scene.snapshot()
            try:
                result = fn()
            except BaseException:
                self.scene = before   # failed commands leave no trace
                raise
            if self.undo_limit > 0:
                self._undo.append(before)
                if len(self._undo) > self.undo_limit:
                    self._undo.pop(0)
                self._redo.clear()
            return result

    def snapshot(self) -> Scene:
        with self._lock:
            return self.scene.snapshot()

    def snapshot_bytes(self) -> bytes:
        return ps.canonical_dumps(ps.scene_to_document(self.snapshot())).encode()

    def undo(self) -> None:
        with self._lock:
            if not self._undo:
                raise err.UnknownReference("nothing to undo")
            self._redo.append(self.scene)
            self.scene = self._undo.pop()

    def redo(self) -> None:
        with self._lock:
            if not self._redo:
                raise err.UnknownReference("nothing to redo")
            self._undo.append(self.scene)
            self.scene = self._redo.pop()

    # -- data and reality -----------------------------------------------------
    def load_data(self, path: str, annotations: dict | None = None) -> int:
        def op():
            self.scene.table = ps.load_csv(path, annotations)
            return len(self.scene.table.rows)
        return self._mutate(op)

    def load_reality(self, path: str, noise: DetectionNoise = NO_NOISE) -> int:
        def op():
            objects, frame = ps.load_reality_document(path)
            self.ground_truth = objects
            detected = detect(objects, frame, noise)
            self.scene.real_objects = detected
            self.scene.frame = frame
            self.scene.view = frame.pose
            self.scene.light_estimate = frame.light_estimate
            for o in detected:
                self.events.append(f"highlighted {o.label}")
            return len(detected)
        return self._mutate(op)

    def fetch_glyph(self, name: str) -> str:
        def op():
            template = fetch_template(name)
            self.scene.templates[template.id] = template
            return template.id
        return self._mutate(op)

    def set_view(self, pose: ViewPose) -> None:
        def op():
            self.scene.view = pose
        return self._mutate(op)

    # -- authoring -------------------------------------------------------------
    def instantiate(
        self,
        template_id: str,
        row_filter: Callable[[Row], bool] | None = None,
        grid_spacing: float | None = DEFAULT_GRID_SPACING,
    ) -> list[str]:
        def op():
            created = instantiate_glyphs(self.scene, template_id, row_filter, grid_spacing)
            return [g.id for g in created]
        return self._mutate(op)

    def group(self, glyph_ids: Sequence[str], grouping_key: str | None = None) -> str:
        return self._mutate(lambda: group_collection(self.scene, glyph_ids, grouping_key).id)

    def group_by_template(self, template_id: str, grouping_key: str | None = None) -> str:
        def op():
            self.scene.template(template_id)
            free = [g for g in self.scene.glyphs.values()
                    if g.template_id == template_id and self.scene.collection_of(g.id) is None]
            ids = [g.id for g in sorted(free, key=lambda g: g.row_id)]
            return group_collection(self.scene, ids, grouping_key).id
        return self._mutate(op)

    def bind(self, attribute: str, channel: VisualChannel,
             scale: float | None = None, palette_seed: int = 0):
        def op():
            mapping, report = mp.bind(self.scene, attribute, channel, scale, palette_seed)
            self.last_report = report
            return mapping, report
        return self._mutate(op)

    def unbind(self, attribute: str, channel: VisualChannel) -> None:
        return self._mutate(lambda: mp.unbind(self.scene, attribute, channel))

    def rescale(self, attribute: str, channel: VisualChannel, factor: float):
        def op():
            mapping, report = mp.modify_scale(self.scene, attribute, channel, factor)
            self.last_report = report
            return mapping, report
        return self._mutate(op)

    def ranked(self, attribute: str, view: ViewPose | None = None) -> list[mp.RankedChannel]:
        with self._lock:
            attr = self.scene.table.attribute(attribute)
            return mp.ranked_channels(self.scene, attr, view)

    def recommend(self, attribute: str, view: ViewPose | None = None) -> mp.RankedChannel:
        with self._lock:
            attr = self.scene.table.attribute(attribute)
            return mp.recommend(self.scene, attr, view)

    def sync(self, request: sc.SyncRequest) -> sc.SyncOutcome:
        return self._mutate(lambda: sc.sync(self.scene, request))

    def autolayout(self, spec: al.JoinSpec, collection_id: str | None = None):
        def op():
            if collection_id is not None:
                members = self.scene.collection(collection_id).member_ids
                glyphs = [self.scene.glyph(gid) for gid in members]
            else:
                glyphs = list(self.scene.glyphs.values())
            corr = al.join(self.scene, self.scene.real_objects, glyphs, spec)
            al.place(self.scene, corr, spec)
            return corr
        return self._mutate(op)

    def sketch(self, collection_id: str, screen_points, plane_y: float) -> None:
        def op():
            if self.scene.frame is None:
                raise err.EmptyFrame("no camera frame loaded; load a reality file first")
            lo.layout_sketch(self.scene, collection_id, screen_points,
                             self.scene.frame, plane_y)
        return self._mutate(op)

    def brush(self, collection_id: str, trace: lo.PoseTrace, reach: float) -> None:
        return self._mutate(lambda: lo.layout_brush(self.scene, collection_id, trace, reach))

    def copy_layout(self, source_id: str, target_id: str, offset=None) -> list[str]:
        return self._mutate(lambda: lo.copy_layout(self.scene, source_id, target_id, offset))

    def stack(self, collection_id: str) -> None:
        return self._mutate(lambda: lo.stack_snap(self.scene, collection_id))

    def move(self, glyph_id: str, du: float, dv: float) -> None:
        return self._mutate(lambda: lo.move_on_plane(self.scene, glyph_id, du, dv))

    def pick(self, target_id: str, grip_distance: float, pose: ViewPose | None = None) -> None:
        return self._mutate(
            lambda: lo.place_at_pose(self.scene, target_id, pose or self.scene.view,
                                     grip_distance))

    # -- persistence --------------------------------------------------------------
    def save(self, path: str) -> None:
        with self._lock:
            ps.save_scene(self.scene, path)

    def load(self, path: str) -> None:
        def op():
            self.scene = ps.load_scene(path)
        return self._mutate(op)

    def export(self, path: str) -> None:
        with self._lock:
            ps.export_scene(self.scene, path)
