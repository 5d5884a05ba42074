import pytest

from marvist import errors as err
from marvist.channels import AttributeType
from marvist.model import (
    DataAttribute,
    DataTable,
    Row,
    VirtualGlyph,
    group_collection,
    instantiate_glyphs,
    validate_integrity,
)
from marvist.persistence import canonical_dumps, scene_to_document

from conftest import make_scene


def test_instantiate_one_glyph_per_row(scene):
    created = instantiate_glyphs(scene, "house")
    assert [g.row_id for g in created] == [0, 1, 2]
    assert all(g.translation == (0.0, 0.0, 0.0) for g in created)
    assert all(g.rotation == (1.0, 0.0, 0.0, 0.0) for g in created)
    assert all(g.channel_values == {} for g in created)
    validate_integrity(scene)


def test_instantiate_empty_selection(scene):
    with pytest.raises(err.EmptySelection):
        instantiate_glyphs(scene, "house", row_filter=lambda r: False)


def test_instantiate_unknown_template(scene):
    with pytest.raises(err.UnknownTemplate):
        instantiate_glyphs(scene, "spaceship")


def test_instantiate_eight_phones():
    # pictogram-style repetition: eight rows, eight glyphs
    scene = make_scene()
    attrs = [DataAttribute("price", AttributeType.QUANTITATIVE, (100.0, 800.0))]
    scene.table = DataTable(attrs, [Row(i, (100.0 * (i + 1),)) for i in range(8)])
    created = instantiate_glyphs(scene, "cube")
    assert len(created) == 8
    assert {g.row_id for g in created} == set(range(8))


def test_instantiate_grid_offsets_are_distinct(scene):
    created = instantiate_glyphs(scene, "house", grid_spacing=0.05)
    positions = {g.translation for g in created}
    assert len(positions) == len(created)
    # row-major 0.05 m grid
    assert created[0].translation == (0.0, 0.0, 0.0)
    assert created[1].translation == (0.05, 0.0, 0.0)


def test_instantiation_is_bijective(scene):
    created = instantiate_glyphs(scene, "house", row_filter=lambda r: r.id != 1)
    assert sorted(g.row_id for g in created) == [0, 2]
    assert len({g.id for g in created}) == len(created)


def test_group_collection_basic(populated):
    ids = list(populated.glyphs)
    c = group_collection(populated, ids[:2])
    assert c.member_ids == ids[:2]
    assert populated.collections[c.id] is c
    validate_integrity(populated)


def test_group_already_collected(populated):
    ids = list(populated.glyphs)
    group_collection(populated, ids[:2])
    with pytest.raises(err.GlyphAlreadyCollected):
        group_collection(populated, [ids[0]])


def test_group_unknown_glyph(populated):
    with pytest.raises(err.UnknownGlyph):
        group_collection(populated, ["nope"])


def test_group_by_model_type_three_collections(scene):
    # routes/hotels/expenses style: one collection per template
    instantiate_glyphs(scene, "house", row_filter=lambda r: r.id == 0)
    instantiate_glyphs(scene, "money", row_filter=lambda r: r.id == 1)
    instantiate_glyphs(scene, "cube", row_filter=lambda r: r.id == 2)
    by_template = {}
    for g in scene.glyphs.values():
        by_template.setdefault(g.template_id, []).append(g.id)
    collections = [group_collection(scene, ids, key)
                   for key, ids in sorted(by_template.items())]
    assert len(collections) == 3
    assert {c.grouping_key for c in collections} == {"house", "money", "cube"}
    validate_integrity(scene)


def test_snapshot_isolated_from_later_edits(populated):
    snap = populated.snapshot()
    gid = next(iter(populated.glyphs))
    populated.glyphs[gid].translation = (9.0, 9.0, 9.0)
    assert snap.glyphs[gid].translation == (0.0, 0.0, 0.0)


def test_snapshot_empty_scene():
    scene = make_scene()
    snap = scene.snapshot()
    assert snap.glyphs == {} and snap.collections == {}


def test_snapshots_byte_identical(populated):
    a = canonical_dumps(scene_to_document(populated.snapshot()))
    b = canonical_dumps(scene_to_document(populated.snapshot()))
    assert a == b


def test_near_zero_quaternion_rejected():
    with pytest.raises(err.InvalidQuaternion):
        VirtualGlyph("g0", 0, "house", rotation=(0.0, 0.0, 0.0, 1e-15))


def test_quaternion_normalized_on_construction():
    g = VirtualGlyph("g0", 0, "house", rotation=(2.0, 0.0, 0.0, 0.0))
    assert g.rotation == (1.0, 0.0, 0.0, 0.0)


def test_table_rejects_ragged_and_duplicates():
    attr = DataAttribute("a", AttributeType.QUANTITATIVE, (0.0, 1.0))
    with pytest.raises(err.RaggedRows):
        DataTable([attr], [Row(0, (0.5, 0.5))])
    with pytest.raises(err.DomainViolation):
        DataTable([attr], [Row(0, (0.5,)), Row(0, (0.6,))])
    with pytest.raises(err.DomainViolation):
        DataTable([attr], [Row(0, (2.0,))])


def test_attribute_domain_invariants():
    with pytest.raises(err.DomainViolation):
        DataAttribute("bad", AttributeType.QUANTITATIVE, (2.0, 1.0))
    with pytest.raises(err.DomainViolation):
        DataAttribute("bad", AttributeType.NOMINAL, ())
    with pytest.raises(err.DomainViolation):
        DataAttribute("bad", AttributeType.ORDINAL, ("a", "a"))
