import math
from pathlib import Path

import pytest

from marvist.channels import AttributeType
from marvist.model import (
    DataAttribute,
    DataTable,
    GlyphTemplate,
    Row,
    Scene,
    ViewPose,
    instantiate_glyphs,
)
from marvist.reality import CameraFrame

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

HOUSE = GlyphTemplate("house", (0.2, 0.25, 0.2), (1, 1, 1),
                      base_color=(30.0, 0.5, 0.5), material_luminance=0.7)
MONEY = GlyphTemplate("money", (0.05, 0.12, 0.05), (4, 1, 4),
                      base_color=(120.0, 0.6, 0.4), material_luminance=0.5)
CUBE = GlyphTemplate("cube", (0.1, 0.1, 0.1), (4, 4, 4), material_luminance=0.6)

FRONT_VIEW = ViewPose((0.0, 0.0, 2.0), (0.0, 0.0, -1.0), (0.0, 1.0, 0.0))
TOP_VIEW = ViewPose((0.0, 2.0, 0.0), (0.0, -1.0, 0.0), (0.0, 0.0, -1.0))


def make_table():
    """Three cities; cost carried by every row, rank ordinal, city nominal."""
    attrs = [
        DataAttribute("city", AttributeType.NOMINAL, ("moscow", "smolensk", "minsk")),
        DataAttribute("cost", AttributeType.QUANTITATIVE, (10.0, 40.0)),
        DataAttribute("rank", AttributeType.ORDINAL, ("low", "mid", "high")),
    ]
    rows = [
        Row(0, ("moscow", 10.0, "low")),
        Row(1, ("smolensk", 20.0, "mid")),
        Row(2, ("minsk", 40.0, "high")),
    ]
    return DataTable(attrs, rows)


def make_scene(view: ViewPose = FRONT_VIEW) -> Scene:
    scene = Scene()
    scene.table = make_table()
    scene.templates["house"] = HOUSE
    scene.templates["money"] = MONEY
    scene.templates["cube"] = CUBE
    scene.view = view
    return scene


def uniform_frame(luminance: float, pose: ViewPose = FRONT_VIEW,
                  rows: int = 8, cols: int = 8, light: float = 1.0) -> CameraFrame:
    grid = tuple(tuple(luminance for _ in range(cols)) for _ in range(rows))
    return CameraFrame(pose, grid, light_estimate=light, fov_h_deg=60.0, fov_v_deg=60.0)


@pytest.fixture
def scene() -> Scene:
    return make_scene()


@pytest.fixture
def populated() -> Scene:
    s = make_scene()
    instantiate_glyphs(s, "house")
    return s


def approx_rel(a: float, b: float, rel: float) -> bool:
    if a == b:
        return True
    return abs(a - b) <= rel * max(abs(a), abs(b))


def forward_with_depth(depth: float) -> ViewPose:
    """View whose forward has exactly `depth` x-component (for the
    orientation boundary tests on length_x)."""
    z = -math.sqrt(max(0.0, 1.0 - depth * depth))
    return ViewPose((0.0, 0.0, 2.0), (depth, 0.0, z), (0.0, 1.0, 0.0))
