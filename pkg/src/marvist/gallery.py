"""Remote glyph-gallery client with a local template cache.

Templates live at ``{MARVIST_GALLERY_URL}/glyphs/{name}``; fetched documents
are cached under MARVIST_CACHE_DIR (default: ~/.cache/marvist) and the cache
is consulted first, so previously fetched templates work offline.
"""
from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import httpx

from . import errors as err
from .model import GlyphTemplate
from .persistence import canonical_dumps, template_from_document

GALLERY_URL_ENV = "MARVIST_GALLERY_URL"
CACHE_DIR_ENV = "MARVIST_CACHE_DIR"


def cache_dir() -> Path:
    override = os.environ.get(CACHE_DIR_ENV)
    if override:
        return Path(override)
    return Path.home() / ".cache" / "marvist"


def _cache_path(name: str) -> Path:
    return cache_dir() / f"{name}.json"


def _write_cache(name: str, doc: dict) -> None:
    target = _cache_path(name)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(canonical_dumps(doc))
        os.replace(tmp, target)   # atomic publish
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def fetch_template(name: str, gallery_url: str | None = None) -> GlyphTemplate:
    """Resolve a template by name: local cache first, then the gallery."""
    cached = _cache_path(name)
    if cached.exists():
        try:
            return template_from_document(json.loads(cached.read_text(encoding="utf-8")))
        except (json.JSONDecodeError, err.MalformedTemplate) as e:
            raise err.MalformedTemplate(f"cached template {name!r}: {e}") from None

    url = gallery_url or os.environ.get(GALLERY_URL_ENV)
    if not url:
        raise err.NetworkUnavailable(
            f"template {name!r} not cached and no gallery URL configured")
    try:
        resp = httpx.get(f"{url.rstrip('/')}/glyphs/{name}", timeout=10.0)
    except httpx.HTTPError as e:
        raise err.NetworkUnavailable(f"gallery unreachable: {e}") from None
    if resp.status_code == 404:
        raise err.NotFound(f"template {name!r} not in gallery")
    if resp.status_code != 200:
        raise err.NetworkUnavailable(f"gallery returned HTTP {resp.status_code}")
    try:
        doc = resp.json()
    except json.JSONDecodeError:
        raise err.MalformedTemplate(f"template {name!r}: response is not JSON") from None
    template = template_from_document(doc)
    _write_cache(name, doc)
    return template
