import json

import pytest

from marvist import errors as err
from marvist import mapping as mp
from marvist.channels import AttributeType, VisualChannel as C
from marvist.model import instantiate_glyphs
from marvist.persistence import (
    canonical_dumps,
    export_document,
    export_scene,
    load_csv,
    load_scene,
    save_scene,
    scene_from_document,
    scene_to_document,
)

from conftest import make_scene, uniform_frame


# -- CSV -------------------------------------------------------------------------

def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def test_csv_header_tags(tmp_path):
    p = write(tmp_path, "t.csv", "city:nom,cost:quant\nparis,10\nlyon,20\n")
    table = load_csv(p)
    assert [a.name for a in table.attributes] == ["city", "cost"]
    assert table.attributes[0].kind is AttributeType.NOMINAL
    assert table.attributes[1].kind is AttributeType.QUANTITATIVE
    assert table.attributes[1].domain == (10.0, 20.0)
    assert [r.id for r in table.rows] == [0, 1]


def test_csv_ragged_row_names_line(tmp_path):
    p = write(tmp_path, "t.csv", "a,b\n1,2\n3\n")
    with pytest.raises(err.RaggedRows) as e:
        load_csv(p)
    assert "line 3" in str(e.value)


def test_csv_empty_file(tmp_path):
    with pytest.raises(err.EmptyFile):
        load_csv(write(tmp_path, "t.csv", ""))


def test_csv_unknown_type_tag(tmp_path):
    with pytest.raises(err.UnknownTypeTag):
        load_csv(write(tmp_path, "t.csv", "a:fancy\n1\n"))


def test_csv_ordinal_needs_categories(tmp_path):
    p = write(tmp_path, "t.csv", "rank:ord\nlow\nhigh\n")
    with pytest.raises(err.MissingCategories):
        load_csv(p)
    table = load_csv(p, {"rank": {"categories": ["low", "high"], "kind": "ordinal"}})
    assert table.attributes[0].domain == ("low", "high")


def test_csv_type_inference(tmp_path):
    p = write(tmp_path, "t.csv", "a,b\n1,x\n2.5,y\n")
    table = load_csv(p)
    assert table.attributes[0].kind is AttributeType.QUANTITATIVE
    assert table.attributes[1].kind is AttributeType.NOMINAL


def test_csv_missing_cells(tmp_path):
    p = write(tmp_path, "t.csv", "kind:nom,cost:quant\nroute,\nhotel,40\n")
    table = load_csv(p)
    assert table.rows[0].values == ("route", None)
    assert table.attributes[1].domain == (40.0, 40.0)


def test_csv_preserves_row_order(tmp_path):
    lines = "v:quant\n" + "\n".join(str(i * 3 % 7) for i in range(20)) + "\n"
    table = load_csv(write(tmp_path, "t.csv", lines))
    assert [r.values[0] for r in table.rows] == [float(i * 3 % 7) for i in range(20)]


def test_csv_month_of_sleep_rows(tmp_path):
    # calendar-style ingest: 31 nights, one duration per night
    rows = "\n".join(f"2018-03-{d:02d},{6 + (d % 4) * 0.5}" for d in range(1, 32))
    p = write(tmp_path, "sleep.csv", "night:nom,duration:quant\n" + rows + "\n")
    table = load_csv(p)
    assert len(table.rows) == 31
    assert table.attributes[1].domain == (6.0, 7.5)


def test_csv_quoted_fields(tmp_path):
    p = write(tmp_path, "t.csv", 'name:nom,cost:quant\n"a, b",3\nplain,4\n')
    table = load_csv(p)
    assert table.rows[0].values[0] == "a, b"


# -- scene round trip -----------------------------------------------------------------

def populated_scene():
    scene = make_scene()
    instantiate_glyphs(scene, "house", grid_spacing=0.05)
    mp.bind(scene, "cost", C.LENGTH_Y)
    mp.bind(scene, "city", C.COLOR_HUE)
    scene.frame = uniform_frame(0.25)
    return scene


def test_save_load_save_byte_identical(tmp_path):
    scene = populated_scene()
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    save_scene(scene, p1)
    save_scene(load_scene(p1), p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_load_rejects_corrupt_reference(tmp_path):
    scene = populated_scene()
    doc = scene_to_document(scene)
    doc["glyphs"][0]["template_id"] = "ghost"
    with pytest.raises(err.IntegrityViolation) as e:
        scene_from_document(doc)
    assert "ghost" in str(e.value)


def test_version_mismatch(tmp_path):
    doc = scene_to_document(make_scene())
    doc["format_version"] = 99
    with pytest.raises(err.VersionMismatch):
        scene_from_document(doc)


def test_diagnostics_survive_round_trip():
    scene = populated_scene()
    mp.bind(scene, "rank", C.LENGTH_Z)   # warns, recorded in diagnostics
    doc = scene_to_document(scene)
    restored = scene_from_document(json.loads(canonical_dumps(doc)))
    assert canonical_dumps([*map(dictify_report, restored.diagnostics)]) == \
        canonical_dumps([*map(dictify_report, scene.diagnostics)])
    assert any(not r.overall_valid for r in restored.diagnostics)


def dictify_report(r):
    from marvist.persistence import report_to_document
    return report_to_document(r)


def test_unknown_fields_preserved(tmp_path):
    doc = scene_to_document(populated_scene())
    doc["vendor_extension"] = {"future": [1, 2, 3]}
    restored = scene_from_document(doc)
    assert restored.extras == {"vendor_extension": {"future": [1, 2, 3]}}
    assert scene_to_document(restored)["vendor_extension"] == {"future": [1, 2, 3]}


def test_missing_values_round_trip(tmp_path):
    scene = make_scene()
    from marvist.model import DataAttribute, DataTable, Row
    scene.table = DataTable(
        [DataAttribute("a", AttributeType.QUANTITATIVE, (0.0, 1.0))],
        [Row(0, (None,)), Row(1, (0.5,))])
    p = tmp_path / "s.json"
    save_scene(scene, p)
    restored = load_scene(p)
    assert restored.table.rows[0].values == (None,)


# -- export ------------------------------------------------------------------------

def test_export_length_sets_single_axis():
    scene = make_scene()
    g = instantiate_glyphs(scene, "house", row_filter=lambda r: r.id == 0)[0]
    g.channel_values[C.LENGTH_Y] = 10.0   # house base y extent is 0.25
    nodes = export_document(scene)["nodes"]
    assert nodes[0]["scale"] == [1.0, 40.0, 1.0]


def test_export_unbound_glyph_unit_scale():
    scene = make_scene()
    instantiate_glyphs(scene, "house", row_filter=lambda r: r.id == 0)
    node = export_document(scene)["nodes"][0]
    assert node["scale"] == [1.0, 1.0, 1.0]
    assert node["color"] == [30.0, 0.5, 0.5]
    assert node["opacity"] == 1.0


def test_export_hue_bound_palette():
    scene = make_scene()
    instantiate_glyphs(scene, "house")
    mp.bind(scene, "city", C.COLOR_HUE)
    nodes = export_document(scene)["nodes"]
    assert [n["color"][0] for n in nodes] == [0.0, 120.0, 240.0]


def test_export_deterministic(tmp_path):
    scene = populated_scene()
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    export_scene(scene, a)
    export_scene(scene, b)
    assert a.read_bytes() == b.read_bytes()


def test_export_volume_scales_all_axes():
    scene = make_scene()
    g = instantiate_glyphs(scene, "cube", row_filter=lambda r: r.id == 0)[0]
    g.channel_values[C.VOLUME] = 8.0 * 0.001   # 8x the cube's base volume
    node = export_document(scene)["nodes"][0]
    assert node["scale"] == pytest.approx([2.0, 2.0, 2.0])


def test_unknown_channel_name_rejected():
    doc = scene_to_document(populated_scene())
    doc["mappings"][0]["channel"] = "sparkle"
    with pytest.raises(err.IntegrityViolation):
        scene_from_document(doc)


def test_template_document_version_checked():
    from marvist.persistence import template_from_document
    good = {"id": "t", "base_extents": [0.1, 0.2, 0.3], "format_version": 1}
    assert template_from_document(good).base_extents == (0.1, 0.2, 0.3)
    with pytest.raises(err.VersionMismatch):
        template_from_document({**good, "format_version": 2})
