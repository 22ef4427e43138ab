"""Content-addressed blob store.

Layout: ``blobs/<2-hex>/<sha256-hex>``. Writes are atomic (temp + rename) and
same-key idempotent; reads re-verify the digest so corrupted bytes can never
be served as valid content. ``root=None`` gives an in-memory store for tests.
"""

from __future__ import annotations

import os
import tempfile
import time
from pathlib import Path

from infomorph.content.canonical import sha256_hex
from infomorph.errors import CorruptEntry, MissingBlob

DEFAULT_GC_BYTES = 2 * 1024**3


class BlobStore:
    def __init__(self, root: str | os.PathLike | None):
        self.root = Path(root) if root is not None else None
        self._memory: dict[str, bytes] = {}
        self._memory_touch: dict[str, float] = {}
        if self.root is not None:
            self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, digest: str) -> Path:
        assert self.root is not None
        return self.root / digest[:2] / digest

    def put(self, data: bytes) -> str:
        digest = sha256_hex(data)
        if self.root is None:
            self._memory[digest] = data
            self._memory_touch[digest] = time.time()
            return digest
        path = self._path(digest)
        if path.exists():
            return digest
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
            os.replace(tmp, path)
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)
        return digest

    def get(self, digest: str) -> bytes:
        """Return verified bytes; MissingBlob / CorruptEntry otherwise."""
        if self.root is None:
            if digest not in self._memory:
                raise MissingBlob(f"no blob {digest[:12]}…")
            data = self._memory[digest]
            self._memory_touch[digest] = time.time()
        else:
            path = self._path(digest)
            if not path.exists():
                raise MissingBlob(f"no blob {digest[:12]}…")
            data = path.read_bytes()
            os.utime(path)
        if sha256_hex(data) != digest:
            raise CorruptEntry(f"blob {digest[:12]}… failed digest verification")
        return data

    def has(self, digest: str) -> bool:
        if self.root is None:
            return digest in self._memory
        return self._path(digest).exists()

    def delete(self, digest: str) -> None:
        if self.root is None:
            self._memory.pop(digest, None)
            self._memory_touch.pop(digest, None)
            return
        path = self._path(digest)
        if path.exists():
            path.unlink()

    def entries(self) -> list[tuple[str, int, float]]:
        """(digest, size, last-touch) for every stored blob."""
        if self.root is None:
            return [(d, len(b), self._memory_touch.get(d, 0.0)) for d, b in self._memory.items()]
        out = []
        for shard in sorted(self.root.iterdir()) if self.root.exists() else []:
            if not shard.is_dir():
                continue
            for path in sorted(shard.iterdir()):
                if path.name.startswith("."):
                    continue
                stat = path.stat()
                out.append((path.name, stat.st_size, stat.st_mtime))
        return out

    def gc(self, max_bytes: int = DEFAULT_GC_BYTES, pinned: frozenset[str] | set[str] = frozenset()) -> list[str]:
        """Evict least-recently-touched blobs until the store fits max_bytes.

        Pinned digests (frozen outputs of approved nodes) are never evicted.
        """
        entries = self.entries()
        total = sum(size for _, size, _ in entries)
        evicted: list[str] = []
        for digest, size, _ in sorted(entries, key=lambda e: e[2]):
            if total <= max_bytes:
                break
            if digest in pinned:
                continue
            self.delete(digest)
            total -= size
            evicted.append(digest)
        return evicted
