"""Core domain model: tabular data, glyph templates, glyph instances,
collections, and the scene aggregate.

Conventions used throughout the engine:

* A glyph's translation is its bottom-center: it spans
  [x - ex/2, x + ex/2] x [y, y + ey] x [z - ez/2, z + ez/2]
  for current extents (ex, ey, ez). Stacking and referent placement key
  off the bottom anchor.
* A real object's translation is the center of its bounding box.
* Missing table cells are stored as None; a row "carries" an attribute only
  when its value is present, and mappings propagate only to carrying rows.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

from . import errors as err
from .channels import AttributeType, VisualChannel
from .geometry import IDENTITY_QUAT, Quat, Vec3, dot, normalize, normalize_quat

Value = float | str | None


@dataclass(frozen=True)
class DataAttribute:
    name: str
    kind: AttributeType
    # quantitative: (min, max); ordinal/nominal: ordered tuple of categories
    domain: tuple[float, float] | tuple[str, ...]

    def __post_init__(self):
        if self.kind is AttributeType.QUANTITATIVE:
            lo, hi = self.domain
            if lo > hi:
                raise err.DomainViolation(f"attribute {self.name}: min {lo} > max {hi}")
        else:
            cats = self.domain
            if not cats:
                raise err.DomainViolation(f"attribute {self.name}: empty category list")
            if len(set(cats)) != len(cats):
                raise err.DomainViolation(f"attribute {self.name}: duplicate categories")

    def contains(self, value: Value) -> bool:
        if value is None:
            return True
        if self.kind is AttributeType.QUANTITATIVE:
            lo, hi = self.domain
            return isinstance(value, (int, float)) and lo <= value <= hi
        return value in self.domain

    def category_index(self, value: str) -> int:
        return self.domain.index(value)

    def numeric(self, value: Value) -> float:
        """Numeric stand-in for a value: the value itself for quantitative,
        the category index for ordinal and nominal."""
        if self.kind is AttributeType.QUANTITATIVE:
            return float(value)
        return float(self.domain.index(value))

    def numeric_max(self) -> float:
        if self.kind is AttributeType.QUANTITATIVE:
            return float(self.domain[1])
        return float(len(self.domain) - 1)


@dataclass(frozen=True)
class Row:
    id: int
    values: tuple[Value, ...]


class DataTable:
    """Rectangular table with stable integer row ids assigned at ingest."""

    def __init__(self, attributes: Sequence[DataAttribute], rows: Sequence[Row]):
        names = [a.name for a in attributes]
        if len(set(names)) != len(names):
            raise err.DomainViolation("duplicate attribute names")
        self.attributes = list(attributes)
        self.rows = list(rows)
        self._index = {a.name: i for i, a in enumerate(self.attributes)}
        self._rows_by_id = {r.id: r for r in self.rows}
        if len(self._rows_by_id) != len(self.rows):
            raise err.DomainViolation("duplicate row ids")
        for r in self.rows:
            if len(r.values) != len(self.attributes):
                raise err.RaggedRows(f"row {r.id} has {len(r.values)} values")
            for a, v in zip(self.attributes, r.values):
                if not a.contains(v):
                    raise err.DomainViolation(f"row {r.id}: {v!r} outside domain of {a.name}")

    def attribute(self, name: str) -> DataAttribute:
        try:
            return self.attributes[self._index[name]]
        except KeyError:
            raise err.UnknownAttribute(name) from None

    def has_attribute(self, name: str) -> bool:
        return name in self._index

    def value(self, row: Row, name: str) -> Value:
        return row.values[self._index[name]]

    def row_by_id(self, row_id: int) -> Row:
        return self._rows_by_id[row_id]

    def column_index(self, name: str) -> int:
        return self._index[name]

    def clone(self) -> "DataTable":
        return DataTable(self.attributes, self.rows)

    @staticmethod
    def empty() -> "DataTable":
        return DataTable([], [])


@dataclass(frozen=True)
class GlyphTemplate:
    id: str
    base_extents: Vec3                       # meters, all > 0
    symmetry_orders: tuple[int, int, int] = (1, 1, 1)  # about y, x, z
    base_color: tuple[float, float, float] = (0.0, 0.0, 0.5)  # h [0,360), s, l
    material_luminance: float = 0.5
    mesh_ref: str | None = None

    def __post_init__(self):
        if min(self.base_extents) <= 0.0:
            raise err.MalformedTemplate(f"template {self.id}: non-positive extents")
        if min(self.symmetry_orders) < 1:
            raise err.MalformedTemplate(f"template {self.id}: symmetry order < 1")


@dataclass(slots=True)
class VirtualGlyph:
    id: str
    row_id: int
    template_id: str
    translation: Vec3 = (0.0, 0.0, 0.0)
    rotation: Quat = IDENTITY_QUAT
    channel_values: dict[VisualChannel, float] = field(default_factory=dict)

    def __post_init__(self):
        self.rotation = normalize_quat(self.rotation)

    def clone(self) -> "VirtualGlyph":
        g = VirtualGlyph.__new__(VirtualGlyph)
        g.id = self.id
        g.row_id = self.row_id
        g.template_id = self.template_id
        g.translation = self.translation
        g.rotation = self.rotation
        g.channel_values = dict(self.channel_values)
        return g


@dataclass(slots=True)
class Collection:
    id: str
    member_ids: list[str]
    grouping_key: str | None = None

    def clone(self) -> "Collection":
        return Collection(self.id, list(self.member_ids), self.grouping_key)


@dataclass(frozen=True)
class ViewPose:
    position: Vec3 = (0.0, 0.0, 0.0)
    forward: Vec3 = (0.0, 0.0, -1.0)
    up: Vec3 = (0.0, 1.0, 0.0)

    def __post_init__(self):
        f = normalize(self.forward)
        u = normalize(self.up)
        if abs(dot(f, u)) > 1e-6:
            raise err.DomainViolation("view forward and up are not orthogonal")
        object.__setattr__(self, "forward", f)
        object.__setattr__(self, "up", u)


FRONT_VIEW = ViewPose(position=(0.0, 0.0, 2.0), forward=(0.0, 0.0, -1.0), up=(0.0, 1.0, 0.0))


class Scene:
    """Root aggregate. Mutations go through the single-writer engine;
    snapshot() hands out deep copies that are safe to share."""

    def __init__(self):
        self.table: DataTable = DataTable.empty()
        self.templates: dict[str, GlyphTemplate] = {}
        self.glyphs: dict[str, VirtualGlyph] = {}
        self.collections: dict[str, Collection] = {}
        self.mappings: list = []          # list[VisualMapping], see mapping module
        self.real_objects: list = []      # list[RealObject], see reality module
        self.view: ViewPose = FRONT_VIEW
        self.light_estimate: float = 1.0
        self.frame = None                 # CameraFrame | None, see reality module
        self.diagnostics: list = []       # latest ValidationReports (one per attr/channel)
        self._glyph_seq = 0
        self._collection_seq = 0

    # -- id allocation -----------------------------------------------------
    def next_glyph_id(self) -> str:
        gid = f"g{self._glyph_seq}"
        self._glyph_seq += 1
        return gid

    def next_collection_id(self) -> str:
        cid = f"c{self._collection_seq}"
        self._collection_seq += 1
        return cid

    # -- lookups -----------------------------------------------------------
    def glyph(self, glyph_id: str) -> VirtualGlyph:
        try:
            return self.glyphs[glyph_id]
        except KeyError:
            raise err.UnknownGlyph(glyph_id) from None

    def template(self, template_id: str) -> GlyphTemplate:
        try:
            return self.templates[template_id]
        except KeyError:
            raise err.UnknownTemplate(template_id) from None

    def collection(self, collection_id: str) -> Collection:
        try:
            return self.collections[collection_id]
        except KeyError:
            raise err.UnknownReference(f"collection {collection_id}") from None

    def collection_of(self, glyph_id: str) -> Collection | None:
        for c in self.collections.values():
            if glyph_id in c.member_ids:
                return c
        return None

    def glyph_row_value(self, glyph: VirtualGlyph, attr_name: str) -> Value:
        return self.table.value(self.table.row_by_id(glyph.row_id), attr_name)

    def glyphs_with_attribute(self, attr_name: str) -> list[VirtualGlyph]:
        """Glyphs whose row carries (has a present value for) the attribute."""
        if not self.table.has_attribute(attr_name):
            return []
        col = self.table.column_index(attr_name)
        out = []
        for g in self.glyphs.values():
            if self.table.row_by_id(g.row_id).values[col] is not None:
                out.append(g)
        return out

    # -- snapshotting --------------------------------------------------------
    def snapshot(self) -> "Scene":
        s = Scene()
        s.table = self.table.clone()
        s.templates = dict(self.templates)
        s.glyphs = {gid: g.clone() for gid, g in self.glyphs.items()}
        s.collections = {cid: c.clone() for cid, c in self.collections.items()}
        s.mappings = [replace(m) for m in self.mappings]
        s.real_objects = [replace(ro) for ro in self.real_objects]
        s.view = self.view
        s.light_estimate = self.light_estimate
        s.frame = self.frame
        s.diagnostics = list(self.diagnostics)
        s._glyph_seq = self._glyph_seq
        s._collection_seq = self._collection_seq
        return s


def instantiate_glyphs(
    scene: Scene,
    template_id: str,
    row_filter: Callable[[Row], bool] | None = None,
    grid_spacing: float | None = None,
) -> list[VirtualGlyph]:
    """Objectify each selected row as one glyph of the given template.

    Glyphs are appended to the scene in row-id order at the origin with
    identity rotation and no channel values. When grid_spacing is given the
    new batch is spread on a row-major horizontal grid so the copies do not
    coincide.
    """
    if template_id not in scene.templates:
        raise err.UnknownTemplate(template_id)
    selected = [r for r in scene.table.rows if row_filter is None or row_filter(r)]
    if not selected:
        raise err.EmptySelection("row filter selected no rows")
    selected.sort(key=lambda r: r.id)
    cols = max(1, math.ceil(math.sqrt(len(selected))))
    created = []
    for i, row in enumerate(selected):
        if grid_spacing is None:
            pos = (0.0, 0.0, 0.0)
        else:
            pos = (grid_spacing * (i % cols), 0.0, grid_spacing * (i // cols))
        g = VirtualGlyph(scene.next_glyph_id(), row.id, template_id, translation=pos)
        scene.glyphs[g.id] = g
        created.append(g)
    return created


def group_collection(
    scene: Scene,
    glyph_ids: Sequence[str],
    grouping_key: str | None = None,
) -> Collection:
    """Group glyphs into a new collection, preserving the given order."""
    if not glyph_ids:
        raise err.EmptyCollection("collection needs at least one glyph")
    for gid in glyph_ids:
        scene.glyph(gid)
        owner = scene.collection_of(gid)
        if owner is not None:
            raise err.GlyphAlreadyCollected(f"{gid} already in {owner.id}")
    if len(set(glyph_ids)) != len(glyph_ids):
        raise err.GlyphAlreadyCollected("duplicate glyph in selection")
    c = Collection(scene.next_collection_id(), list(glyph_ids), grouping_key)
    scene.collections[c.id] = c
    return c


# -- derived glyph geometry --------------------------------------------------
# Bound channel values drive geometry: volume rescales all axes, then each
# area sets its two spanning axes, then each length sets its axis exactly;
# the more specific channel wins an axis.

def glyph_scale_factors(glyph: VirtualGlyph, template: GlyphTemplate) -> Vec3:
    from .channels import AREA_AXES, AREA_CHANNELS, LENGTH_AXIS, LENGTH_CHANNELS

    cv = glyph.channel_values
    base = template.base_extents
    f = [1.0, 1.0, 1.0]
    vol = cv.get(VisualChannel.VOLUME)
    if vol is not None:
        s = (vol / (base[0] * base[1] * base[2])) ** (1.0 / 3.0)
        f = [s, s, s]
    for ch in AREA_CHANNELS:
        if ch in cv:
            a, b = AREA_AXES[ch]
            s = math.sqrt(cv[ch] / (base[a] * base[b]))
            f[a] = s
            f[b] = s
    for ch in LENGTH_CHANNELS:
        if ch in cv:
            axis = LENGTH_AXIS[ch]
            f[axis] = cv[ch] / base[axis]
    return (f[0], f[1], f[2])


def glyph_extents(glyph: VirtualGlyph, template: GlyphTemplate) -> Vec3:
    """Current world extents after applying bound size channels."""
    sx, sy, sz = glyph_scale_factors(glyph, template)
    bx, by, bz = template.base_extents
    return (bx * sx, by * sy, bz * sz)


def glyph_color(glyph: VirtualGlyph, template: GlyphTemplate) -> tuple[float, float, float]:
    h, s, l = template.base_color
    cv = glyph.channel_values
    h = cv.get(VisualChannel.COLOR_HUE, h)
    s = cv.get(VisualChannel.COLOR_SATURATION, s)
    l = cv.get(VisualChannel.COLOR_LUMINANCE, l)
    return (h, s, l)


def glyph_opacity(glyph: VirtualGlyph) -> float:
    return glyph.channel_values.get(VisualChannel.OPACITY, 1.0)


def glyph_rotation(glyph: VirtualGlyph) -> Quat:
    """Placed rotation composed with data-driven angle channels
    (phi about y, then theta about x, then psi about z)."""
    from .geometry import quat_about_axis, quat_mul

    q = glyph.rotation
    cv = glyph.channel_values
    for ch, axis in ((VisualChannel.ANGLE_PHI, (0.0, 1.0, 0.0)),
                     (VisualChannel.ANGLE_THETA, (1.0, 0.0, 0.0)),
                     (VisualChannel.ANGLE_PSI, (0.0, 0.0, 1.0))):
        if ch in cv:
            q = quat_mul(q, quat_about_axis(axis, cv[ch]))
    return q


def validate_integrity(scene: Scene) -> None:
    """Referential-integrity sweep; raises IntegrityViolation with the
    offending id. Tests run this after every public operation."""
    for g in scene.glyphs.values():
        if g.template_id not in scene.templates:
            raise err.IntegrityViolation(f"glyph {g.id}: unknown template {g.template_id}")
        if g.row_id not in scene.table._rows_by_id:
            raise err.IntegrityViolation(f"glyph {g.id}: unknown row {g.row_id}")
        n = math.sqrt(sum(c * c for c in g.rotation))
        if abs(n - 1.0) > 1e-9:
            raise err.IntegrityViolation(f"glyph {g.id}: quaternion norm {n}")
    seen: dict[str, str] = {}
    for c in scene.collections.values():
        if not c.member_ids:
            raise err.IntegrityViolation(f"collection {c.id} empty")
        for gid in c.member_ids:
            if gid not in scene.glyphs:
                raise err.IntegrityViolation(f"collection {c.id}: unknown glyph {gid}")
            if gid in seen:
                raise err.IntegrityViolation(f"glyph {gid} in {seen[gid]} and {c.id}")
            seen[gid] = c.id
    pairs = set()
    for m in scene.mappings:
        if not scene.table.has_attribute(m.attribute):
            raise err.IntegrityViolation(f"mapping on unknown attribute {m.attribute}")
        key = (m.attribute, m.channel)
        if key in pairs:
            raise err.IntegrityViolation(f"duplicate mapping {key}")
        pairs.add(key)
