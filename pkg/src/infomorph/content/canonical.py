"""Canonical serialization: the single source of truth for content hashing.

Rules (documented in docs/content-schemas.md):
  * JSON with sorted keys, compact separators, UTF-8, no trailing newline.
  * Floats that are mathematically integral are normalized to ints, so
    ``2.0`` and ``2`` hash identically across producers.
  * NaN / infinities are rejected with the JSON-path of the offending field.
  * Typed edge content is wrapped in a ``{"kind": ..., "body": ...}`` envelope
    before hashing; ``content_hash(x) == sha256(canonicalize(x))``.
"""

from __future__ import annotations

import hashlib
import json
import math
from typing import Any

from infomorph.errors import InvalidContent

_CONTENT_REGISTRY: dict[str, Any] = {}


def register_content(cls: Any) -> Any:
    """Class decorator: make a content type parseable from its envelope."""
    _CONTENT_REGISTRY[cls.KIND] = cls
    return cls


def _normalize(value: Any, path: str) -> Any:
    if value is None or isinstance(value, (str, bool, int)):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            raise InvalidContent(f"non-finite number at {path}", path=path)
        if value.is_integer():
            return int(value)
        return value
    if isinstance(value, (list, tuple)):
        return [_normalize(v, f"{path}[{i}]") for i, v in enumerate(value)]
    if isinstance(value, dict):
        out = {}
        for key, v in value.items():
            if not isinstance(key, str):
                raise InvalidContent(f"non-string key at {path}", path=path)
            out[key] = _normalize(v, f"{path}.{key}")
        return out
    raise InvalidContent(f"unserializable value of type {type(value).__name__} at {path}", path=path)


def canonical_bytes(value: Any) -> bytes:
    normalized = _normalize(value, "$")
    return json.dumps(
        normalized, sort_keys=True, separators=(",", ":"), ensure_ascii=False, allow_nan=False
    ).encode("utf-8")


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def canonicalize(content: Any) -> bytes:
    """Serialize any edge content value to its canonical envelope bytes."""
    kind = getattr(content, "KIND", None)
    if kind is None:
        raise InvalidContent(f"not an edge content value: {type(content).__name__}")
    content.validate()
    return canonical_bytes({"kind": kind, "body": content.to_jsonable()})


def content_hash(content: Any) -> str:
    return sha256_hex(canonicalize(content))


def parse_content(data: bytes) -> Any:
    try:
        envelope = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InvalidContent(f"undecodable content envelope: {exc}") from exc
    if not isinstance(envelope, dict) or "kind" not in envelope or "body" not in envelope:
        raise InvalidContent("content envelope must be {kind, body}")
    cls = _CONTENT_REGISTRY.get(envelope["kind"])
    if cls is None:
        raise InvalidContent(f"unknown content kind {envelope['kind']!r}")
    content = cls.from_jsonable(envelope["body"])
    content.validate()
    return content
