import math

import pytest

from marvist import errors as err
from marvist import mapping as mp
from marvist import nudging
from marvist.channels import VisualChannel as C
from marvist.model import GlyphTemplate, instantiate_glyphs
from marvist.persistence import canonical_dumps, report_to_document

from conftest import CUBE, FRONT_VIEW, forward_with_depth, make_scene, uniform_frame

COS45 = math.cos(math.radians(45.0))

SPHERE = GlyphTemplate("sphere", (0.04, 0.04, 0.04), (360, 360, 360))
PRISM3 = GlyphTemplate("prism3", (0.1, 0.1, 0.1), (3, 1, 1))


# -- orientation ---------------------------------------------------------------

def test_orientation_parallel_axis_invalid():
    v = nudging.validate_orientation(C.LENGTH_Z, FRONT_VIEW)
    assert not v.valid and v.metric == 1.0


def test_orientation_orthogonal_axis_valid():
    v = nudging.validate_orientation(C.LENGTH_X, FRONT_VIEW)
    assert v.valid and v.metric == 0.0


def test_orientation_area_either_axis_rule():
    # derived by hand: front view makes x and y flat, z deep
    assert nudging.validate_orientation(C.AREA_FRONT, FRONT_VIEW).valid
    assert not nudging.validate_orientation(C.AREA_TOP, FRONT_VIEW).valid
    assert not nudging.validate_orientation(C.AREA_LEFT, FRONT_VIEW).valid


@pytest.mark.parametrize("depth,expected", [
    (COS45 - 1e-9, True),
    (COS45, True),
    (COS45 + 1e-9, False),
])
def test_orientation_flips_exactly_at_cos45(depth, expected):
    v = nudging.validate_orientation(C.LENGTH_X, forward_with_depth(depth))
    assert v.valid is expected


def test_orientation_monotone_in_depth():
    last_valid = True
    for step in range(0, 91, 5):
        depth = math.sin(math.radians(step))
        valid = nudging.validate_orientation(C.LENGTH_X, forward_with_depth(depth)).valid
        assert not (valid and not last_valid)   # never flips invalid -> valid
        last_valid = valid


def test_orientation_inapplicable_channels():
    for ch in (C.VOLUME, C.ANGLE_PHI, C.COLOR_HUE, C.OPACITY):
        with pytest.raises(err.InapplicableRule):
            nudging.validate_orientation(ch, FRONT_VIEW)


# -- symmetry -------------------------------------------------------------------

def test_symmetry_cube_invalid_house_valid(populated):
    cube_v = nudging.validate_symmetry(C.ANGLE_PHI, CUBE)
    assert not cube_v.valid and cube_v.metric == 4.0
    house_v = nudging.validate_symmetry(C.ANGLE_PHI, populated.templates["house"])
    assert house_v.valid and house_v.metric == 1.0


def test_symmetry_sphere_sentinel_invalid():
    assert not nudging.validate_symmetry(C.ANGLE_THETA, SPHERE).valid


def test_symmetry_boundary_order_three_valid():
    assert nudging.validate_symmetry(C.ANGLE_PHI, PRISM3).valid
    four = GlyphTemplate("four", (0.1, 0.1, 0.1), (4, 1, 1))
    assert not nudging.validate_symmetry(C.ANGLE_PHI, four).valid


def test_symmetry_axis_selection():
    # orders are (about y, about x, about z); phi spins about y
    t = GlyphTemplate("t", (0.1, 0.1, 0.1), (6, 1, 1))
    assert not nudging.validate_symmetry(C.ANGLE_PHI, t).valid
    assert nudging.validate_symmetry(C.ANGLE_THETA, t).valid
    assert nudging.validate_symmetry(C.ANGLE_PSI, t).valid


def test_symmetry_inapplicable():
    with pytest.raises(err.InapplicableRule):
        nudging.validate_symmetry(C.LENGTH_X, CUBE)


# -- contrast ---------------------------------------------------------------------

def contrast_scene(material: float, surround: float, light: float = 1.0):
    scene = make_scene()
    scene.templates["probe"] = GlyphTemplate("probe", (0.2, 0.2, 0.2),
                                             material_luminance=material)
    g = instantiate_glyphs(scene, "probe", row_filter=lambda r: r.id == 0)[0]
    g.translation = (0.0, -0.1, 0.0)
    scene.frame = uniform_frame(surround)
    scene.light_estimate = light
    return scene, g


def ratio_of(material, surround, light=1.0):
    scene, g = contrast_scene(material, surround, light)
    return nudging.validate_contrast(g, scene.templates["probe"], scene.frame, light)


def test_contrast_stated_formula():
    v = ratio_of(0.8, 0.2)
    assert v.metric == pytest.approx((0.8 + 0.05) / (0.2 + 0.05))
    assert v.valid


def test_contrast_equal_luminance_invalid():
    v = ratio_of(0.5, 0.5)
    assert v.metric == 1.0 and not v.valid


def test_contrast_threshold_exactly_three():
    # (0.7 + 0.05)/(0.2 + 0.05) computes to exactly 3.0 in floats
    v = ratio_of(0.7, 0.2)
    assert v.metric == 3.0 and v.valid
    below = ratio_of(0.25, 0.05)
    assert below.metric < 3.0 and not below.valid
    above = ratio_of(0.8, 0.2)
    assert above.valid


def test_contrast_symmetric_in_swap():
    a = ratio_of(0.8, 0.2)
    b = ratio_of(0.2, 0.8)
    assert a.metric == b.metric and a.valid == b.valid


def test_contrast_uses_light_estimate():
    # dim light pulls the glyph toward the dark surround
    bright = ratio_of(0.8, 0.2, light=1.0)
    dim = ratio_of(0.8, 0.2, light=0.25)
    assert bright.valid and not dim.valid


def test_contrast_footprint_out_of_frame():
    scene, g = contrast_scene(0.8, 0.2)
    g.translation = (0.0, 0.0, 5.0)   # behind the camera at z=2
    with pytest.raises(err.FootprintOutOfFrame):
        nudging.validate_contrast(g, scene.templates["probe"], scene.frame, 1.0)


def test_contrast_empty_frame():
    scene, g = contrast_scene(0.8, 0.2)
    with pytest.raises(err.EmptyFrame):
        nudging.validate_contrast(g, scene.templates["probe"], None, 1.0)


# -- separability -----------------------------------------------------------------

def other(channel):
    return mp.VisualMapping("other_attr", channel, scale=1.0)


def test_separability_area_subsumes_bound_length():
    v = nudging.validate_separability(C.AREA_TOP, "a_i", [other(C.LENGTH_X)])
    assert not v.valid and "subsume" in v.message


def test_separability_length_integration():
    v = nudging.validate_separability(C.LENGTH_Y, "a_i", [other(C.LENGTH_X)])
    assert not v.valid and "integrates" in v.message


def test_separability_disjoint_area_stays_valid():
    # area_left spans y-z and does not contain the bound x axis
    v = nudging.validate_separability(C.AREA_LEFT, "a_i", [other(C.LENGTH_X)])
    assert v.valid


def test_separability_double_encoding_exempt():
    same = mp.VisualMapping("cost", C.LENGTH_Y, scale=1.0)
    v = nudging.validate_separability(C.COLOR_LUMINANCE, "cost", [same])
    assert v.valid
    v2 = nudging.validate_separability(C.LENGTH_X, "cost", [same])
    assert v2.valid   # same attribute: integration exemption


def test_separability_volume_rules():
    assert not nudging.validate_separability(C.VOLUME, "a", [other(C.LENGTH_X)]).valid
    assert not nudging.validate_separability(C.VOLUME, "a", [other(C.AREA_TOP)]).valid
    assert not nudging.validate_separability(C.LENGTH_X, "a", [other(C.VOLUME)]).valid
    assert not nudging.validate_separability(C.AREA_LEFT, "a", [other(C.VOLUME)]).valid


def test_separability_optical_integration():
    assert not nudging.validate_separability(C.COLOR_LUMINANCE, "a", [other(C.OPACITY)]).valid
    assert not nudging.validate_separability(C.OPACITY, "a", [other(C.COLOR_LUMINANCE)]).valid
    assert nudging.validate_separability(C.COLOR_LUMINANCE, "a", [other(C.COLOR_HUE)]).valid


def test_separability_symmetric_in_time():
    for a, b in [(C.LENGTH_X, C.LENGTH_Y), (C.LENGTH_Y, C.LENGTH_Z)]:
        first = nudging.validate_separability(b, "a_i", [other(a)])
        second = nudging.validate_separability(a, "a_i", [other(b)])
        assert first.valid == second.valid is False


# -- composed reports ----------------------------------------------------------------

def test_validate_all_clean_scene(populated):
    report = nudging.validate_all(populated, C.LENGTH_X, "cost")
    assert report.overall_valid
    assert {v.rule for v in report.verdicts} == {"orientation", "separability"}


def test_validate_all_two_failures_in_one_report(populated):
    mp.bind(populated, "rank", C.LENGTH_X)
    report = nudging.validate_all(populated, C.LENGTH_Z, "cost")
    failed = {v.rule for v in report.failures()}
    assert failed == {"orientation", "separability"}


def test_validate_all_hue_only_contrast_applicable(populated):
    populated.frame = uniform_frame(0.2)
    report = nudging.validate_all(populated, C.COLOR_HUE, "city")
    assert {v.rule for v in report.verdicts} == {"contrast"}


def test_validate_all_without_frame_omits_contrast(populated):
    report = nudging.validate_all(populated, C.COLOR_HUE, "city")
    assert report.verdicts == ()


def test_reports_deterministic(populated):
    populated.frame = uniform_frame(0.2)
    a = canonical_dumps(report_to_document(nudging.validate_all(populated, C.LENGTH_Z, "cost")))
    b = canonical_dumps(report_to_document(nudging.validate_all(populated, C.LENGTH_Z, "cost")))
    assert a == b


def test_advisory_contract_mapping_set_identical(populated):
    # the mapping lands regardless of validation outcome
    mp.bind(populated, "cost", C.LENGTH_Y)
    before = [(m.attribute, m.channel) for m in populated.mappings]
    mapping, report = mp.bind(populated, "rank", C.LENGTH_Z)
    assert not report.overall_valid
    assert [(m.attribute, m.channel) for m in populated.mappings] == before + [("rank", C.LENGTH_Z)]
