"""Ingested-document store: one canonical JSON file per document."""

from __future__ import annotations

import os
from pathlib import Path

from infomorph.content.canonical import canonicalize, parse_content, sha256_hex
from infomorph.content.model import Document
from infomorph.errors import UnknownId


class DocumentStore:
    def __init__(self, root: str | os.PathLike | None):
        self.root = Path(root) if root is not None else None
        self._memory: dict[str, bytes] = {}
        if self.root is not None:
            self.root.mkdir(parents=True, exist_ok=True)

    def save(self, doc: Document) -> str:
        data = canonicalize(doc)
        if self.root is None:
            self._memory[doc.doc_id] = data
        else:
            path = self.root / f"{doc.doc_id}.json"
            tmp = path.with_suffix(".json.tmp")
            tmp.write_bytes(data + b"\n")
            os.replace(tmp, path)
        return sha256_hex(data)

    def load(self, doc_id: str) -> Document:
        if self.root is None:
            data = self._memory.get(doc_id)
            if data is None:
                raise UnknownId(f"no document {doc_id!r}")
        else:
            path = self.root / f"{doc_id}.json"
            if not path.exists():
                raise UnknownId(f"no document {doc_id!r}")
            data = path.read_bytes().rstrip(b"\n")
        doc = parse_content(data)
        if not isinstance(doc, Document):
            raise UnknownId(f"{doc_id!r} is not a document")
        return doc

    def content_hash(self, doc_id: str) -> str:
        return sha256_hex(canonicalize(self.load(doc_id)))

    def ids(self) -> list[str]:
        if self.root is None:
            return sorted(self._memory)
        return sorted(p.stem for p in self.root.glob("*.json"))

    def manifest(self, doc_id: str) -> dict:
        doc = self.load(doc_id)
        enriched = all(p.summary is not None and p.embedding is not None for p in doc.pages)
        return {
            "doc_id": doc.doc_id,
            "origin": doc.origin,
            "hash": self.content_hash(doc_id),
            "media_kind": doc.media_kind,
            "title": doc.title,
            "page_count": doc.page_count,
            "enriched": bool(doc.pages) and enriched,
        }
