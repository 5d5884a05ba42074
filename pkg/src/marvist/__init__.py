"""Headless authoring engine for AR glyph-based data visualizations.

Binds tabular data to 3D virtual glyphs, validates encodings against a
simulated real-world context, synchronizes visual scales with detected real
objects, and auto-lays-out glyphs onto their physical referents. Exposed as
a library, a scriptable CLI (``marvist``), and an HTTP session service.
"""

from .channels import AttributeType, VisualChannel
from .engine import Engine
from .errors import EngineError
from .mapping import VisualMapping, bind, encode, modify_scale, ranked_channels, recommend, unbind
from .model import (
    Collection,
    DataAttribute,
    DataTable,
    GlyphTemplate,
    Row,
    Scene,
    ViewPose,
    VirtualGlyph,
    group_collection,
    instantiate_glyphs,
    validate_integrity,
)
from .nudging import ValidationReport, Verdict, validate_all
from .reality import CameraFrame, DetectionNoise, RealObject, detect, extract_channels
from .sync import SyncRequest, sync

__version__ = "0.1.0"

__all__ = [
    "AttributeType",
    "CameraFrame",
    "Collection",
    "DataAttribute",
    "DataTable",
    "DetectionNoise",
    "Engine",
    "EngineError",
    "GlyphTemplate",
    "RealObject",
    "Row",
    "Scene",
    "SyncRequest",
    "ValidationReport",
    "Verdict",
    "ViewPose",
    "VirtualGlyph",
    "VisualChannel",
    "VisualMapping",
    "bind",
    "detect",
    "encode",
    "extract_channels",
    "group_collection",
    "instantiate_glyphs",
    "modify_scale",
    "ranked_channels",
    "recommend",
    "sync",
    "unbind",
    "validate_all",
    "validate_integrity",
]
