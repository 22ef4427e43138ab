"""Byte-deterministic solid-color PNG writer for mock image operations."""

from __future__ import annotations

import struct
import zlib

SIZE = 64


def _chunk(tag: bytes, payload: bytes) -> bytes:
    return (
        struct.pack(">I", len(payload))
        + tag
        + payload
        + struct.pack(">I", zlib.crc32(tag + payload) & 0xFFFFFFFF)
    )


def solid_png(rgb: tuple[int, int, int], label: str = "") -> bytes:
    """A SIZE x SIZE solid PNG; ``label`` lands in a tEXt chunk so distinct
    provenance always yields distinct bytes even for identical colors."""
    row = b"\x00" + bytes(rgb) * SIZE
    raw = row * SIZE
    ihdr = struct.pack(">IIBBBBB", SIZE, SIZE, 8, 2, 0, 0, 0)
    out = b"\x89PNG\r\n\x1a\n" + _chunk(b"IHDR", ihdr)
    if label:
        out += _chunk(b"tEXt", b"Comment\x00" + label.encode("ascii", "replace"))
    out += _chunk(b"IDAT", zlib.compress(raw, 9))
    out += _chunk(b"IEND", b"")
    return out


def png_dimensions(data: bytes) -> tuple[int, int]:
    if data[:8] != b"\x89PNG\r\n\x1a\n":
        raise ValueError("not a PNG")
    width, height = struct.unpack(">II", data[16:24])
    return width, height
