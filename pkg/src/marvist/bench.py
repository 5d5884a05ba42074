"""Throughput harness: headless construction and propagation timings.

Mirrors the device experiments' protocol (one warm-up run, then the
reported statistic over 10 timed runs) but measures engine throughput on
the host instead of device frame rates.
"""
from __future__ import annotations

import statistics
import time

from . import mapping as mp
from .channels import AttributeType, VisualChannel
from .model import DataAttribute, DataTable, GlyphTemplate, Row, Scene, instantiate_glyphs

BUILTIN_TEMPLATES = {
    "cube": GlyphTemplate("cube", (0.1, 0.1, 0.1), (4, 4, 4), material_luminance=0.6),
    "sphere": GlyphTemplate("sphere", (0.1, 0.1, 0.1), (360, 360, 360),
                            material_luminance=0.6),
    "shoe": GlyphTemplate("shoe", (0.28, 0.1, 0.1), (1, 1, 1), material_luminance=0.4),
    "house": GlyphTemplate("house", (0.2, 0.25, 0.2), (1, 1, 1), material_luminance=0.7),
}


def build_scene(n: int, template_label: str) -> Scene:
    """Construct a scene with n glyphs of the template and one size binding."""
    scene = Scene()
    template = BUILTIN_TEMPLATES[template_label]
    scene.templates[template.id] = template
    attr = DataAttribute("value", AttributeType.QUANTITATIVE, (1.0, float(n)))
    rows = [Row(i, (float(i + 1),)) for i in range(n)]
    scene.table = DataTable([attr], rows)
    instantiate_glyphs(scene, template.id, grid_spacing=0.05)
    mp.bind(scene, "value", VisualChannel.LENGTH_Y)
    return scene


def time_construction(n: int, template_label: str, runs: int = 10) -> list[float]:
    times = []
    for _ in range(runs + 1):   # first run is warm-up
        t0 = time.perf_counter()
        build_scene(n, template_label)
        times.append(time.perf_counter() - t0)
    return times[1:]


def time_propagation(n: int, template_label: str, runs: int = 10) -> list[float]:
    scene = build_scene(n, template_label)
    times = []
    for _ in range(runs + 1):
        t0 = time.perf_counter()
        mp.modify_scale(scene, "value", VisualChannel.LENGTH_Y, 1.0)
        times.append(time.perf_counter() - t0)
    return times[1:]


def time_export(n: int, template_label: str, runs: int = 10) -> list[float]:
    """Static render-path analog: deriving the full node list of a scene."""
    from .persistence import export_nodes

    scene = build_scene(n, template_label)
    times = []
    for _ in range(runs + 1):
        t0 = time.perf_counter()
        export_nodes(scene)
        times.append(time.perf_counter() - t0)
    return times[1:]


def run_bench(n: int = 10000, template_label: str = "cube", runs: int = 10) -> list[dict]:
    construct = time_construction(n, template_label, runs)
    propagate = time_propagation(n, template_label, runs)
    export = time_export(n, template_label, runs)
    return [
        {"metric": "construct", "n": n, "template": template_label,
         "median_s": statistics.median(construct), "runs": runs, "samples": construct},
        {"metric": "propagate", "n": n, "template": template_label,
         "median_s": statistics.median(propagate), "runs": runs, "samples": propagate},
        {"metric": "export", "n": n, "template": template_label,
         "median_s": statistics.median(export), "runs": runs, "samples": export},
    ]
