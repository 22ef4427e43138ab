"""Minimal PDF text extraction.

Targets simple text PDFs: objects are located by scanning for
``N 0 obj … endobj``, FlateDecode streams are inflated with zlib, and text is
pulled from Tj/TJ/' operators inside BT…ET blocks, one extracted string per
page object in document order. No xref table, encryption, or font decoding —
this is the binary-format adapter for plainly generated PDFs, not a general
renderer.
"""

from __future__ import annotations

import re
import zlib

from infomorph.errors import ParseError

_OBJ_RE = re.compile(rb"(\d+)\s+(\d+)\s+obj\b(.*?)endobj", re.DOTALL)
_STREAM_RE = re.compile(rb"stream\r?\n(.*?)\r?\nendstream", re.DOTALL)
_PAGE_RE = re.compile(rb"/Type\s*/Page\b(?!s)")
_CONTENTS_RE = re.compile(rb"/Contents\s+(\d+)\s+\d+\s+R")
_TITLE_RE = re.compile(rb"/Title\s*\((.*?)(?<!\\)\)", re.DOTALL)
_TJ_RE = re.compile(rb"\((?:[^()\\]|\\.)*\)|TJ|Tj|'|BT|ET|T\*|Td|TD")
_STRING_RE = re.compile(rb"\((?:[^()\\]|\\.)*\)", re.DOTALL)

_ESCAPES = {b"n": b"\n", b"r": b"\r", b"t": b"\t", b"b": b"\b", b"f": b"\f", b"(": b"(", b")": b")", b"\\": b"\\"}


def _unescape(raw: bytes) -> bytes:
    out = bytearray()
    i = 0
    while i < len(raw):
        ch = raw[i : i + 1]
        if ch == b"\\" and i + 1 < len(raw):
            nxt = raw[i + 1 : i + 2]
            if nxt in _ESCAPES:
                out += _ESCAPES[nxt]
                i += 2
                continue
            if nxt.isdigit():
                octal = raw[i + 1 : i + 4]
                j = 1
                while j < 3 and i + 1 + j < len(raw) and raw[i + 1 + j : i + 2 + j].isdigit():
                    j += 1
                out.append(int(raw[i + 1 : i + 1 + j], 8) & 0xFF)
                i += 1 + j
                continue
            i += 1
            continue
        out += ch
        i += 1
    return bytes(out)


def _stream_text(obj_body: bytes) -> str:
    match = _STREAM_RE.search(obj_body)
    if not match:
        return ""
    data = match.group(1)
    if b"/FlateDecode" in obj_body:
        try:
            data = zlib.decompress(data)
        except zlib.error as exc:
            raise ParseError(f"undecodable FlateDecode stream: {exc}") from exc
    parts: list[str] = []
    for string in _STRING_RE.findall(data):
        decoded = _unescape(string[1:-1])
        try:
            parts.append(decoded.decode("utf-8"))
        except UnicodeDecodeError:
            parts.append(decoded.decode("latin-1"))
    return "\n".join(p for p in parts if p.strip())


def extract_pdf(data: bytes) -> tuple[str, list[str]]:
    """(title, page texts). Raises ParseError for non-PDF input."""
    if not data.startswith(b"%PDF-"):
        raise ParseError("not a PDF file (missing %PDF- header)")
    objects: dict[int, bytes] = {}
    for match in _OBJ_RE.finditer(data):
        objects[int(match.group(1))] = match.group(3)

    title = ""
    m = _TITLE_RE.search(data)
    if m:
        title = _unescape(m.group(1)).decode("latin-1")

    pages: list[str] = []
    for num in sorted(objects):
        body = objects[num]
        if not _PAGE_RE.search(body):
            continue
        m = _CONTENTS_RE.search(body)
        if not m:
            pages.append("")
            continue
        contents = objects.get(int(m.group(1)))
        if contents is None:
            raise ParseError(f"page contents object {m.group(1).decode()} missing", page=len(pages) + 1)
        pages.append(_stream_text(contents))
    if not pages:
        raise ParseError("no page objects found")
    return title, pages
