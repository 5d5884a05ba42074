import itertools
import random

import pytest

from marvist import errors as err
from marvist.autolayout import Correspondence, JoinSpec, join, place
from marvist.channels import AttributeType
from marvist.model import (
    DataAttribute,
    DataTable,
    GlyphTemplate,
    Row,
    Scene,
    instantiate_glyphs,
)
from marvist.reality import RealObject, TextRegion

from conftest import FRONT_VIEW


def rank_scene(channel_values, data_values):
    """Objects with given length_x values vs glyphs with given data values."""
    scene = Scene()
    scene.view = FRONT_VIEW
    scene.table = DataTable(
        [DataAttribute("v", AttributeType.QUANTITATIVE,
                       (min(data_values), max(data_values)))],
        [Row(i, (float(v),)) for i, v in enumerate(data_values)])
    scene.templates["bar"] = GlyphTemplate("bar", (0.02, 0.05, 0.02))
    instantiate_glyphs(scene, "bar")
    scene.real_objects = [
        RealObject(f"o{i}", f"o{i}", (0.1 * i, 0.05, -0.5),
                   extents=(float(v), 0.1, 0.1), detected=True, detection_index=i)
        for i, v in enumerate(channel_values)
    ]
    return scene


def text_scene(texts, names):
    scene = Scene()
    scene.view = FRONT_VIEW
    scene.table = DataTable(
        [DataAttribute("name", AttributeType.NOMINAL, tuple(dict.fromkeys(names)))],
        [Row(i, (n,)) for i, n in enumerate(names)])
    scene.templates["bar"] = GlyphTemplate("bar", (0.02, 0.05, 0.02))
    instantiate_glyphs(scene, "bar")
    scene.real_objects = [
        RealObject(f"key_{t}", f"key {t}", (0.02 * i, 0.005, -0.4),
                   extents=(0.018, 0.01, 0.018),
                   text_regions=(TextRegion(t, 2e-4),),
                   detected=True, detection_index=i)
        for i, t in enumerate(texts)
    ]
    return scene


def pairs_by_value(scene, correspondence):
    """(object length_x, data value) pairs for readability."""
    objs = {o.id: o for o in scene.real_objects}
    out = []
    for oid, gid in correspondence.pairs:
        g = scene.glyphs[gid]
        out.append((objs[oid].extents[0], scene.glyph_row_value(g, "v")))
    return sorted(out)


def test_rank_join_spec_example():
    scene = rank_scene([3.0, 1.0, 2.0], [10.0, 30.0, 20.0])
    spec = JoinSpec("rank", "length_x", "v")
    corr = join(scene, scene.real_objects, list(scene.glyphs.values()), spec)
    assert pairs_by_value(scene, corr) == [(1.0, 10.0), (2.0, 20.0), (3.0, 30.0)]


def test_equality_join_keycaps():
    scene = text_scene(["A", "B"], ["B", "A"])
    spec = JoinSpec("equality", "text", "name")
    corr = join(scene, scene.real_objects, list(scene.glyphs.values()), spec)
    resolved = {oid: scene.glyph_row_value(scene.glyphs[gid], "name")
                for oid, gid in corr.pairs}
    assert resolved == {"key_A": "A", "key_B": "B"}


def test_rank_join_cardinality_mismatch():
    scene = rank_scene([3.0, 1.0, 2.0], [10.0, 30.0])
    spec = JoinSpec("rank", "length_x", "v")
    with pytest.raises(err.CardinalityMismatch):
        join(scene, scene.real_objects, list(scene.glyphs.values()), spec)


def test_equality_join_duplicate_keys():
    scene = text_scene(["A", "A"], ["A", "B"])
    spec = JoinSpec("equality", "text", "name")
    with pytest.raises(err.DuplicateKey):
        join(scene, scene.real_objects, list(scene.glyphs.values()), spec)


def test_equality_join_unmatched_reported_not_failed():
    scene = text_scene(["A", "Q"], ["A", "B"])
    spec = JoinSpec("equality", "text", "name")
    corr = join(scene, scene.real_objects, list(scene.glyphs.values()), spec)
    assert len(corr.pairs) == 1
    assert corr.unmatched_objects == ("key_Q",)
    assert len(corr.unmatched_glyphs) == 1


def test_equality_join_is_its_own_inverse():
    scene = text_scene(list("QWERTY"), list("YTREWQ"))
    spec = JoinSpec("equality", "text", "name")
    glyphs = list(scene.glyphs.values())
    first = join(scene, scene.real_objects, glyphs, spec)
    second = join(scene, scene.real_objects, glyphs, spec)
    assert first == second


def test_rank_join_ties_break_by_index():
    scene = rank_scene([2.0, 2.0], [5.0, 5.0])
    spec = JoinSpec("rank", "length_x", "v")
    corr = join(scene, scene.real_objects, list(scene.glyphs.values()), spec)
    # equal values: detection order pairs with row order
    gids = list(scene.glyphs)
    assert corr.pairs == (("o0", gids[0]), ("o1", gids[1]))


def brute_force_best(channel_values, data_values):
    """Independent oracle: enumerate all n! assignments and return the one
    maximizing rank concordance (unique for distinct values)."""
    n = len(channel_values)
    best, best_score, best_count = None, -1, 0
    for perm in itertools.permutations(range(n)):
        score = 0
        for i, j in itertools.combinations(range(n), 2):
            if (channel_values[i] - channel_values[j]) * (data_values[perm[i]] - data_values[perm[j]]) > 0:
                score += 1
        if score > best_score:
            best, best_score, best_count = perm, score, 1
        elif score == best_score:
            best_count += 1
    return best, best_count


@pytest.mark.parametrize("n", range(1, 9))
def test_rank_join_matches_brute_force(n):
    rng = random.Random(1000 + n)
    for _ in range(3 if n >= 7 else 10):
        channel_values = rng.sample(range(1, 100), n)
        data_values = rng.sample(range(1, 100), n)
        perm, count = brute_force_best(channel_values, data_values)
        assert n == 1 or count == 1   # unique monotonic bijection
        scene = rank_scene([float(c) for c in channel_values],
                           [float(d) for d in data_values])
        spec = JoinSpec("rank", "length_x", "v")
        corr = join(scene, scene.real_objects, list(scene.glyphs.values()), spec)
        gids = list(scene.glyphs)
        expected = {(f"o{i}", gids[perm[i]]) for i in range(n)}
        assert set(corr.pairs) == expected


def test_rank_join_monotone_no_inversions():
    rng = random.Random(7)
    for _ in range(25):
        n = rng.randint(2, 12)
        channel_values = [float(v) for v in rng.sample(range(1, 1001), n)]
        data_values = [float(v) for v in rng.sample(range(1, 1001), n)]
        scene = rank_scene(channel_values, data_values)
        spec = JoinSpec("rank", "length_x", "v")
        corr = join(scene, scene.real_objects, list(scene.glyphs.values()), spec)
        objs = {o.id: o.extents[0] for o in scene.real_objects}
        resolved = [(objs[oid], scene.glyph_row_value(scene.glyphs[gid], "v"))
                    for oid, gid in corr.pairs]
        for (c1, d1), (c2, d2) in itertools.combinations(resolved, 2):
            assert (c1 - c2) * (d1 - d2) > 0


def test_correspondence_must_be_injective():
    with pytest.raises(err.DomainViolation):
        Correspondence((("o0", "g0"), ("o0", "g1")))


def test_place_top_anchor_arithmetic():
    scene = rank_scene([2.0], [10.0])
    # object top face: center y 0.05 + h/2 = 0.1
    scene.real_objects = [RealObject("o0", "o0", (0.3, 0.05, -0.5),
                                     extents=(0.1, 0.1, 0.1),
                                     detected=True, detection_index=0)]
    spec = JoinSpec("rank", "length_x", "v", anchor="top")
    corr = join(scene, scene.real_objects, list(scene.glyphs.values()), spec)
    place(scene, corr, spec)
    g = next(iter(scene.glyphs.values()))
    assert g.translation == (0.3, 0.1, -0.5)


def test_place_top_example_from_keycap_height():
    # object top face at y=0.02, glyph height 0.1: translation y = 0.02
    scene = Scene()
    scene.view = FRONT_VIEW
    scene.table = DataTable(
        [DataAttribute("v", AttributeType.QUANTITATIVE, (1.0, 1.0))], [Row(0, (1.0,))])
    scene.templates["bar"] = GlyphTemplate("bar", (0.02, 0.1, 0.02))
    instantiate_glyphs(scene, "bar")
    scene.real_objects = [RealObject("key", "key", (0.0, 0.01, -0.4),
                                     extents=(0.02, 0.02, 0.02),
                                     detected=True, detection_index=0)]
    spec = JoinSpec("rank", "length_x", "v", anchor="top")
    corr = Correspondence((("key", next(iter(scene.glyphs))),))
    place(scene, corr, spec)
    g = next(iter(scene.glyphs.values()))
    assert g.translation[1] == pytest.approx(0.02)
    assert g.translation[1] + 0.1 / 2.0 == pytest.approx(0.07)   # center


def test_place_front_anchor_clearance():
    # camera looks along -z; object front face z = 0.05 + 0.1/2 = 0.1... using
    # center z=0.05 and depth 0.1 the face toward the camera is z = 0.1
    scene = rank_scene([2.0], [10.0])
    scene.real_objects = [RealObject("o0", "o0", (0.0, 0.05, 0.05),
                                     extents=(0.1, 0.1, 0.1),
                                     detected=True, detection_index=0)]
    spec = JoinSpec("rank", "length_x", "v", anchor="front", clearance=0.05)
    corr = join(scene, scene.real_objects, list(scene.glyphs.values()), spec)
    place(scene, corr, spec)
    g = next(iter(scene.glyphs.values()))
    back_face = g.translation[2] - 0.02 / 2.0   # bar depth 0.02
    assert back_face == pytest.approx(0.15)
    assert g.translation[1] == pytest.approx(0.0)   # grounded at object bottom


def test_place_center_anchor():
    scene = rank_scene([2.0], [10.0])
    scene.real_objects = [RealObject("o0", "o0", (0.2, 0.3, -0.6),
                                     extents=(0.1, 0.1, 0.1),
                                     detected=True, detection_index=0)]
    spec = JoinSpec("rank", "length_x", "v", anchor="center")
    corr = join(scene, scene.real_objects, list(scene.glyphs.values()), spec)
    place(scene, corr, spec)
    g = next(iter(scene.glyphs.values()))
    # bottom-origin glyph: center = translation + height/2
    assert g.translation == (0.2, 0.3 - 0.05 / 2.0, -0.6)


def test_place_deterministic():
    def run():
        scene = rank_scene([3.0, 1.0, 2.0], [10.0, 30.0, 20.0])
        spec = JoinSpec("rank", "length_x", "v", anchor="top")
        corr = join(scene, scene.real_objects, list(scene.glyphs.values()), spec)
        place(scene, corr, spec)
        return [g.translation for g in scene.glyphs.values()]
    assert run() == run()


def test_place_unknown_reference():
    scene = rank_scene([2.0], [10.0])
    spec = JoinSpec("rank", "length_x", "v")
    with pytest.raises(err.UnknownReference):
        place(scene, Correspondence((("ghost", next(iter(scene.glyphs))),)), spec)


def test_join_mode_attribute_kind_enforced():
    scene = text_scene(["A", "B"], ["A", "B"])
    with pytest.raises(err.IncompatibleChannels):
        join(scene, scene.real_objects, list(scene.glyphs.values()),
             JoinSpec("rank", "length_x", "name"))      # nominal attr, rank mode
    scene2 = rank_scene([1.0, 2.0], [5.0, 9.0])
    with pytest.raises(err.IncompatibleChannels):
        join(scene2, scene2.real_objects, list(scene2.glyphs.values()),
             JoinSpec("equality", "text", "v"))          # quantitative attr
