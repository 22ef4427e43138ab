"""File-format adapters: bytes in, (title, pages, author, created) out.

Each adapter is a pure function of the file bytes. OOXML formats are read
with stdlib zipfile + ElementTree; PDF text extraction is the minimal reader
in pdftext. A "page" is a physical page (pdf), an explicit page break run
(docx), a slide (pptx), a sheet (xlsx), or a form-feed-separated segment
(text). HTML files are chunked like URLs.
"""

from __future__ import annotations

import io
import re
import zipfile
from dataclasses import dataclass, field
from xml.etree import ElementTree

from infomorph.errors import ParseError, UnsupportedFormat
from infomorph.ingest.chunking import chunk_text
from infomorph.ingest.htmltext import extract_main_text
from infomorph.ingest.pdftext import extract_pdf

W_NS = "{http://schemas.openxmlformats.org/wordprocessingml/2006/main}"
A_NS = "{http://schemas.openxmlformats.org/drawingml/2006/main}"
P_NS = "{http://schemas.openxmlformats.org/presentationml/2006/main}"
S_NS = "{http://schemas.openxmlformats.org/spreadsheetml/2006/main}"
R_NS = "{http://schemas.openxmlformats.org/officeDocument/2006/relationships}"
DC_NS = "{http://purl.org/dc/elements/1.1/}"
DCTERMS_NS = "{http://purl.org/dc/terms/}"
REL_NS = "{http://schemas.openxmlformats.org/package/2006/relationships}"


@dataclass
class RawPage:
    text: str
    images: list[bytes] = field(default_factory=list)


@dataclass
class Parsed:
    title: str
    pages: list[RawPage]
    author: str | None = None
    created_at: str | None = None


EXTENSION_KINDS = {
    ".pdf": "pdf",
    ".docx": "docx",
    ".pptx": "pptx",
    ".xlsx": "xlsx",
    ".html": "html",
    ".htm": "html",
    ".txt": "text",
    ".text": "text",
    ".md": "text",
    ".png": "image",
    ".jpg": "image",
    ".jpeg": "image",
    ".gif": "image",
}


def detect_media_kind(name: str) -> str:
    for ext, kind in EXTENSION_KINDS.items():
        if name.lower().endswith(ext):
            return kind
    raise UnsupportedFormat(f"cannot detect media kind of {name!r}")


def parse_bytes(data: bytes, media_kind: str, name: str = "") -> Parsed:
    if len(data) == 0:
        raise ParseError("file is empty")
    if media_kind == "text":
        return parse_text(data, name)
    if media_kind == "html":
        return parse_html(data, name)
    if media_kind == "pdf":
        return parse_pdf(data)
    if media_kind == "docx":
        return parse_docx(data)
    if media_kind == "pptx":
        return parse_pptx(data)
    if media_kind == "xlsx":
        return parse_xlsx(data)
    if media_kind == "image":
        return Parsed(title=name, pages=[RawPage(text="", images=[data])])
    raise UnsupportedFormat(f"no adapter for media kind {media_kind!r}")


# -- plain text -----------------------------------------------------------------

def parse_text(data: bytes, name: str) -> Parsed:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"text file is not UTF-8: {exc}") from exc
    segments = text.split("\f") if "\f" in text else [text]
    pages = [RawPage(text=segment) for segment in segments]
    return Parsed(title=name, pages=pages)


def parse_html(data: bytes, name: str) -> Parsed:
    try:
        html = data.decode("utf-8", errors="replace")
    except Exception as exc:  # pragma: no cover - decode with replace never raises
        raise ParseError(str(exc)) from exc
    text, title = extract_main_text(html)
    pages = [RawPage(text=chunk) for chunk in chunk_text(text)]
    return Parsed(title=title or name, pages=pages)


def parse_pdf(data: bytes) -> Parsed:
    title, texts = extract_pdf(data)
    return Parsed(title=title, pages=[RawPage(text=t) for t in texts])


# -- OOXML ------------------------------------------------------------------------

def _open_zip(data: bytes) -> zipfile.ZipFile:
    try:
        return zipfile.ZipFile(io.BytesIO(data))
    except zipfile.BadZipFile as exc:
        raise ParseError(f"not a valid OOXML package: {exc}") from exc


def _xml(zf: zipfile.ZipFile, path: str) -> ElementTree.Element:
    try:
        return ElementTree.fromstring(zf.read(path))
    except KeyError:
        raise ParseError(f"OOXML package missing {path}") from None
    except ElementTree.ParseError as exc:
        raise ParseError(f"malformed XML in {path}: {exc}") from exc


def _core_properties(zf: zipfile.ZipFile) -> tuple[str, str | None, str | None]:
    title, author, created = "", None, None
    if "docProps/core.xml" in zf.namelist():
        root = _xml(zf, "docProps/core.xml")
        node = root.find(f"{DC_NS}title")
        title = (node.text or "") if node is not None else ""
        node = root.find(f"{DC_NS}creator")
        author = node.text if node is not None and node.text else None
        node = root.find(f"{DCTERMS_NS}created")
        created = node.text if node is not None and node.text else None
    return title, author, created


def _relationships(zf: zipfile.ZipFile, rels_path: str) -> dict[str, str]:
    if rels_path not in zf.namelist():
        return {}
    root = _xml(zf, rels_path)
    return {rel.get("Id", ""): rel.get("Target", "") for rel in root.findall(f"{REL_NS}Relationship")}


def _read_media(zf: zipfile.ZipFile, base: str, target: str) -> bytes | None:
    path = target
    if target.startswith("../"):
        path = f"{base}/{target[3:]}"
    elif not target.startswith(("/", base)):
        path = f"{base}/{target}"
    path = path.lstrip("/")
    if path in zf.namelist():
        return zf.read(path)
    return None


def parse_docx(data: bytes) -> Parsed:
    zf = _open_zip(data)
    title, author, created = _core_properties(zf)
    root = _xml(zf, "word/document.xml")
    rels = _relationships(zf, "word/_rels/document.xml.rels")
    pages: list[RawPage] = [RawPage(text="")]
    lines: list[list[str]] = [[]]
    for para in root.iter(f"{W_NS}p"):
        breaks = [br for br in para.iter(f"{W_NS}br") if br.get(f"{W_NS}type") == "page"]
        breaks += list(para.iter(f"{W_NS}lastRenderedPageBreak"))
        if breaks:
            pages.append(RawPage(text=""))
            lines.append([])
        text = "".join(t.text or "" for t in para.iter(f"{W_NS}t"))
        if text:
            lines[-1].append(text)
        for blip in para.iter(f"{A_NS}blip"):
            rid = blip.get(f"{R_NS}embed")
            target = rels.get(rid or "")
            if target:
                media = _read_media(zf, "word", target)
                if media:
                    pages[-1].images.append(media)
    for page, page_lines in zip(pages, lines):
        page.text = "\n".join(page_lines)
    return Parsed(title=title, pages=pages, author=author, created_at=created)


_SLIDE_PATH_RE = re.compile(r"^ppt/slides/slide(\d+)\.xml$")


def parse_pptx(data: bytes) -> Parsed:
    zf = _open_zip(data)
    title, author, created = _core_properties(zf)
    slides = sorted(
        ((int(m.group(1)), path) for path in zf.namelist() if (m := _SLIDE_PATH_RE.match(path))),
    )
    if not slides:
        raise ParseError("pptx has no slides")
    pages: list[RawPage] = []
    for number, path in slides:
        root = _xml(zf, path)
        rels = _relationships(zf, f"ppt/slides/_rels/slide{number}.xml.rels")
        slide_title = ""
        texts: list[str] = []
        for shape in root.iter(f"{P_NS}sp"):
            ph = shape.find(f".//{P_NS}ph")
            runs = "\n".join(
                "".join(t.text or "" for t in para.iter(f"{A_NS}t")) for para in shape.iter(f"{A_NS}p")
            ).strip()
            if not runs:
                continue
            if ph is not None and ph.get("type") in ("title", "ctrTitle") and not slide_title:
                slide_title = runs
            else:
                texts.append(runs)
        page = RawPage(text="")
        for blip in root.iter(f"{A_NS}blip"):
            rid = blip.get(f"{R_NS}embed")
            target = rels.get(rid or "")
            if target:
                media = _read_media(zf, "ppt", target)
                if media:
                    page.images.append(media)
        # Slide title prefixes the page text.
        parts = ([slide_title] if slide_title else []) + texts
        page.text = "\n".join(parts)
        pages.append(page)
    return Parsed(title=title, pages=pages, author=author, created_at=created)


def _column_of(ref: str) -> str:
    return "".join(ch for ch in ref if ch.isalpha())


def parse_xlsx(data: bytes) -> Parsed:
    zf = _open_zip(data)
    title, author, created = _core_properties(zf)
    workbook = _xml(zf, "xl/workbook.xml")
    shared: list[str] = []
    if "xl/sharedStrings.xml" in zf.namelist():
        for si in _xml(zf, "xl/sharedStrings.xml").iter(f"{S_NS}si"):
            shared.append("".join(t.text or "" for t in si.iter(f"{S_NS}t")))
    sheet_names = [s.get("name", f"Sheet{i+1}") for i, s in enumerate(workbook.iter(f"{S_NS}sheet"))]
    sheet_paths = sorted(
        path for path in zf.namelist() if re.match(r"^xl/worksheets/sheet\d+\.xml$", path)
    )
    if not sheet_paths:
        raise ParseError("xlsx has no worksheets")
    pages: list[RawPage] = []
    for i, path in enumerate(sheet_paths):
        root = _xml(zf, path)
        lines: list[str] = []
        name = sheet_names[i] if i < len(sheet_names) else f"Sheet{i+1}"
        if name:
            lines.append(name)
        for row in root.iter(f"{S_NS}row"):
            cells: list[str] = []
            for cell in row.iter(f"{S_NS}c"):
                ctype = cell.get("t", "n")
                if ctype == "inlineStr":
                    cells.append("".join(t.text or "" for t in cell.iter(f"{S_NS}t")))
                    continue
                value = cell.find(f"{S_NS}v")
                raw = value.text if value is not None and value.text else ""
                if ctype == "s":
                    idx = int(raw) if raw else 0
                    cells.append(shared[idx] if idx < len(shared) else "")
                else:
                    cells.append(raw)
            lines.append("\t".join(cells))
        pages.append(RawPage(text="\n".join(lines)))
    return Parsed(title=title, pages=pages, author=author, created_at=created)
