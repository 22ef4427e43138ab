"""Fingerprint-keyed cache over the blob store.

An entry maps a node fingerprint to the content hash of its output; the bytes
live content-addressed in the blob store. ``get`` verifies the stored bytes on
every read — a corrupted or missing blob drops the entry, records the event,
and reports a miss, so stale or damaged data never reaches the engine.
"""

from __future__ import annotations

import os
import tempfile
from pathlib import Path

from infomorph.errors import CorruptEntry, MissingBlob
from infomorph.store.blobs import BlobStore


class Cache:
    def __init__(self, root: str | os.PathLike | None, blobs: BlobStore):
        self.root = Path(root) if root is not None else None
        self.blobs = blobs
        self._memory: dict[str, str] = {}
        self.corruption_log: list[str] = []
        if self.root is not None:
            self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, fingerprint: str) -> Path:
        assert self.root is not None
        return self.root / fingerprint[:2] / fingerprint

    def put(self, fingerprint: str, digest: str, data: bytes) -> None:
        stored = self.blobs.put(data)
        if stored != digest:
            raise CorruptEntry(f"cache_put digest mismatch: claimed {digest[:12]}…, bytes hash to {stored[:12]}…")
        if self.root is None:
            self._memory[fingerprint] = digest
            return
        path = self._path(fingerprint)
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
        try:
            with os.fdopen(fd, "w", encoding="ascii") as fh:
                fh.write(digest)
            os.replace(tmp, path)
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)

    def get(self, fingerprint: str | None) -> str | None:
        """Content hash for a fingerprint, or None on miss/corruption."""
        if fingerprint is None:
            return None
        if self.root is None:
            digest = self._memory.get(fingerprint)
        else:
            path = self._path(fingerprint)
            digest = path.read_text(encoding="ascii").strip() if path.exists() else None
        if digest is None:
            return None
        try:
            self.blobs.get(digest)
        except (MissingBlob, CorruptEntry) as exc:
            self.corruption_log.append(f"{fingerprint[:12]}…: {exc}")
            self.drop(fingerprint)
            return None
        return digest

    def drop(self, fingerprint: str) -> None:
        if self.root is None:
            self._memory.pop(fingerprint, None)
            return
        path = self._path(fingerprint)
        if path.exists():
            path.unlink()

    def fingerprints(self) -> list[str]:
        if self.root is None:
            return sorted(self._memory)
        out = []
        for shard in sorted(self.root.iterdir()) if self.root.exists() else []:
            if shard.is_dir():
                out.extend(p.name for p in sorted(shard.iterdir()) if not p.name.startswith("."))
        return out
