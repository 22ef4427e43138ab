"""Content types flowing along workflow edges.

Documents and page sets feed scatter nodes; the three plan IRs sit between
gather planners and transduce builders; artifacts are builder outputs.
All values are immutable after construction and validated before hashing.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from decimal import Decimal, InvalidOperation
from typing import Any

from infomorph.content.canonical import register_content
from infomorph.errors import InvalidContent

DOCUMENT = "document"
PAGE_SET = "page-set"
PLAN_DOCUMENT = "plan:document"
PLAN_SLIDES = "plan:slides"
PLAN_TABLE = "plan:table"
ARTIFACT = "artifact"

PLAN_KINDS = (PLAN_DOCUMENT, PLAN_SLIDES, PLAN_TABLE)

MEDIA_KINDS = ("pdf", "docx", "pptx", "xlsx", "html", "text", "image")

SUMMARY_MAX_CHARS = 480
EMBEDDING_DIM = 256
_NORM_TOL = 1e-6

_HASH_RE = re.compile(r"^[0-9a-f]{64}$")
_CURRENCY_RE = re.compile(r"^[A-Z]{3}$")


def _require(cond: bool, message: str, path: str) -> None:
    if not cond:
        raise InvalidContent(f"{message} at {path}", path=path)


# -- documents ----------------------------------------------------------------

@dataclass(frozen=True)
class Page:
    index: int
    text: str
    image_refs: tuple[str, ...] = ()
    summary: str | None = None
    embedding: tuple[float, ...] | None = None

    def validate(self, path: str = "$.page") -> None:
        _require(isinstance(self.index, int) and self.index >= 1, "page index must be >= 1", f"{path}.index")
        _require(isinstance(self.text, str), "page text must be a string", f"{path}.text")
        for i, ref in enumerate(self.image_refs):
            _require(bool(_HASH_RE.match(ref)), "image ref must be a sha256 hex digest", f"{path}.image_refs[{i}]")
        if self.summary is not None:
            _require(len(self.summary) <= SUMMARY_MAX_CHARS, f"summary exceeds {SUMMARY_MAX_CHARS} chars", f"{path}.summary")
        if self.embedding is not None:
            _require(len(self.embedding) == EMBEDDING_DIM, f"embedding must have dim {EMBEDDING_DIM}", f"{path}.embedding")
            norm = math.sqrt(sum(v * v for v in self.embedding))
            _require(norm == 0.0 or abs(norm - 1.0) <= _NORM_TOL, "embedding must be unit-norm or zero", f"{path}.embedding")

    def to_jsonable(self) -> dict:
        out: dict[str, Any] = {"index": self.index, "text": self.text, "image_refs": list(self.image_refs)}
        if self.summary is not None:
            out["summary"] = self.summary
        if self.embedding is not None:
            out["embedding"] = list(self.embedding)
        return out

    @classmethod
    def from_jsonable(cls, data: dict) -> "Page":
        emb = data.get("embedding")
        return cls(
            index=data["index"],
            text=data["text"],
            image_refs=tuple(data.get("image_refs", ())),
            summary=data.get("summary"),
            embedding=tuple(float(v) for v in emb) if emb is not None else None,
        )


@register_content
@dataclass(frozen=True)
class Document:
    KIND = DOCUMENT

    doc_id: str
    origin: str
    media_kind: str
    title: str
    pages: tuple[Page, ...] = ()
    author: str | None = None
    created_at: str | None = None
    tags: tuple[str, ...] = ()
    summary: str | None = None

    @property
    def page_count(self) -> int:
        return len(self.pages)

    def page(self, index: int) -> Page:
        if not 1 <= index <= len(self.pages):
            raise InvalidContent(f"page {index} out of range for document {self.doc_id}")
        return self.pages[index - 1]

    def validate(self, path: str = "$") -> None:
        _require(bool(self.doc_id), "doc_id must be non-empty", f"{path}.doc_id")
        _require(self.media_kind in MEDIA_KINDS, f"media_kind must be one of {MEDIA_KINDS}", f"{path}.media_kind")
        for i, page in enumerate(self.pages):
            _require(page.index == i + 1, "page indices must be contiguous from 1", f"{path}.pages[{i}].index")
            page.validate(f"{path}.pages[{i}]")
        if self.summary is not None:
            _require(len(self.summary) <= SUMMARY_MAX_CHARS, f"summary exceeds {SUMMARY_MAX_CHARS} chars", f"{path}.summary")

    def to_jsonable(self) -> dict:
        metadata: dict[str, Any] = {
            "title": self.title,
            "page_count": self.page_count,
            "tags": list(self.tags),
        }
        if self.author is not None:
            metadata["author"] = self.author
        if self.created_at is not None:
            metadata["created_at"] = self.created_at
        out: dict[str, Any] = {
            "doc_id": self.doc_id,
            "origin": self.origin,
            "media_kind": self.media_kind,
            "metadata": metadata,
            "pages": [p.to_jsonable() for p in self.pages],
        }
        if self.summary is not None:
            out["summary"] = self.summary
        return out

    @classmethod
    def from_jsonable(cls, data: dict) -> "Document":
        metadata = data.get("metadata", {})
        pages = tuple(Page.from_jsonable(p) for p in data.get("pages", ()))
        if "page_count" in metadata and metadata["page_count"] != len(pages):
            raise InvalidContent("metadata.page_count disagrees with pages", path="$.metadata.page_count")
        return cls(
            doc_id=data["doc_id"],
            origin=data.get("origin", ""),
            media_kind=data["media_kind"],
            title=metadata.get("title", ""),
            pages=pages,
            author=metadata.get("author"),
            created_at=metadata.get("created_at"),
            tags=tuple(metadata.get("tags", ())),
            summary=data.get("summary"),
        )

    def with_pages(self, pages: tuple[Page, ...], summary: str | None = None) -> "Document":
        return replace(self, pages=pages, summary=summary if summary is not None else self.summary)


# -- page sets ----------------------------------------------------------------

@dataclass(frozen=True)
class PageRef:
    doc_id: str
    index: int
    score: float
    rationale: str = ""

    def sort_key(self) -> tuple:
        return (-self.score, self.doc_id, self.index)

    def to_jsonable(self) -> dict:
        return {"doc_id": self.doc_id, "index": self.index, "score": self.score, "rationale": self.rationale}

    @classmethod
    def from_jsonable(cls, data: dict) -> "PageRef":
        return cls(data["doc_id"], data["index"], float(data["score"]), data.get("rationale", ""))


@register_content
@dataclass(frozen=True)
class PageSet:
    KIND = PAGE_SET

    entries: tuple[PageRef, ...] = ()

    def validate(self, path: str = "$") -> None:
        seen: set[tuple[str, int]] = set()
        for i, ref in enumerate(self.entries):
            key = (ref.doc_id, ref.index)
            _require(key not in seen, f"duplicate page ref {key}", f"{path}.entries[{i}]")
            seen.add(key)
            _require(0.0 <= ref.score <= 1.0, "score must be in [0, 1]", f"{path}.entries[{i}].score")
            _require(ref.index >= 1, "page index must be >= 1", f"{path}.entries[{i}].index")
        keys = [ref.sort_key() for ref in self.entries]
        _require(keys == sorted(keys), "entries must be ordered by score desc, doc_id, index", f"{path}.entries")

    def to_jsonable(self) -> dict:
        return {"entries": [e.to_jsonable() for e in self.entries]}

    @classmethod
    def from_jsonable(cls, data: dict) -> "PageSet":
        return cls(tuple(PageRef.from_jsonable(e) for e in data.get("entries", ())))


def page_set_from(entries: list[PageRef] | tuple[PageRef, ...]) -> PageSet:
    """Build a PageSet in canonical order (score desc, then doc_id, then index)."""
    ordered = tuple(sorted(entries, key=PageRef.sort_key))
    ps = PageSet(ordered)
    ps.validate()
    return ps


# -- plan blocks ---------------------------------------------------------------

BLOCK_TYPES = ("paragraph", "bullet_list", "table_ref", "image_ref", "citation")


def validate_block(block: Any, path: str) -> None:
    _require(isinstance(block, dict), "block must be an object", path)
    btype = block.get("type")
    _require(btype in BLOCK_TYPES, f"block type must be one of {BLOCK_TYPES}", f"{path}.type")
    if btype == "paragraph":
        _require(isinstance(block.get("text"), str), "paragraph needs text", f"{path}.text")
    elif btype == "bullet_list":
        items = block.get("items")
        _require(isinstance(items, list) and all(isinstance(i, str) for i in items), "bullet_list needs string items", f"{path}.items")
    elif btype == "table_ref":
        _require(isinstance(block.get("ref"), str) and block["ref"] != "", "table_ref needs a ref", f"{path}.ref")
    elif btype == "image_ref":
        _require(bool(_HASH_RE.match(block.get("hash", ""))), "image_ref needs a sha256 hash", f"{path}.hash")
    elif btype == "citation":
        _require(isinstance(block.get("doc_id"), str) and block["doc_id"] != "", "citation needs doc_id", f"{path}.doc_id")
        _require(isinstance(block.get("page"), int) and block["page"] >= 1, "citation needs page >= 1", f"{path}.page")


# -- document plan ---------------------------------------------------------------

@dataclass(frozen=True)
class Section:
    heading: str
    blocks: tuple[dict, ...] = ()

    def to_jsonable(self) -> dict:
        return {"heading": self.heading, "blocks": list(self.blocks)}

    @classmethod
    def from_jsonable(cls, data: dict) -> "Section":
        return cls(data["heading"], tuple(data.get("blocks", ())))


@register_content
@dataclass(frozen=True)
class DocumentPlan:
    KIND = PLAN_DOCUMENT

    sections: tuple[Section, ...] = ()

    def validate(self, path: str = "$") -> None:
        for i, section in enumerate(self.sections):
            _require(isinstance(section.heading, str) and section.heading.strip() != "", "heading must be non-empty", f"{path}.sections[{i}].heading")
            for j, block in enumerate(section.blocks):
                validate_block(block, f"{path}.sections[{i}].blocks[{j}]")

    def to_jsonable(self) -> dict:
        return {"sections": [s.to_jsonable() for s in self.sections]}

    @classmethod
    def from_jsonable(cls, data: dict) -> "DocumentPlan":
        return cls(tuple(Section.from_jsonable(s) for s in data.get("sections", ())))

    def citations(self) -> list[tuple[str, int]]:
        out = []
        for section in self.sections:
            for block in section.blocks:
                if block.get("type") == "citation":
                    out.append((block["doc_id"], block["page"]))
        return out


# -- slide deck plan ------------------------------------------------------------

SLOT_STATES = ("empty", "sourced", "generated", "restyled")


@dataclass(frozen=True)
class ImageSlot:
    slot_id: str
    state: dict = field(default_factory=lambda: {"state": "empty"})

    def current_hash(self) -> str | None:
        return self.state.get("hash")

    def validate(self, path: str) -> None:
        _require(isinstance(self.slot_id, str) and self.slot_id != "", "slot_id must be non-empty", f"{path}.slot_id")
        name = self.state.get("state")
        _require(name in SLOT_STATES, f"slot state must be one of {SLOT_STATES}", f"{path}.state")
        if name in ("sourced", "generated", "restyled"):
            _require(bool(_HASH_RE.match(self.state.get("hash", ""))), "slot needs an image hash", f"{path}.state.hash")
        if name in ("generated", "restyled"):
            _require(isinstance(self.state.get("prompt"), str), "slot needs its prompt", f"{path}.state.prompt")
        if name == "restyled":
            _require(bool(_HASH_RE.match(self.state.get("source_hash", ""))), "restyled slot must name its source image hash", f"{path}.state.source_hash")

    def to_jsonable(self) -> dict:
        return {"slot_id": self.slot_id, "state": dict(self.state)}

    @classmethod
    def from_jsonable(cls, data: dict) -> "ImageSlot":
        return cls(data["slot_id"], dict(data.get("state", {"state": "empty"})))


@dataclass(frozen=True)
class Slide:
    title: str
    blocks: tuple[dict, ...] = ()
    image_slots: tuple[ImageSlot, ...] = ()
    notes: str | None = None

    def to_jsonable(self) -> dict:
        out: dict[str, Any] = {
            "title": self.title,
            "blocks": list(self.blocks),
            "image_slots": [s.to_jsonable() for s in self.image_slots],
        }
        if self.notes is not None:
            out["notes"] = self.notes
        return out

    @classmethod
    def from_jsonable(cls, data: dict) -> "Slide":
        return cls(
            title=data.get("title", ""),
            blocks=tuple(data.get("blocks", ())),
            image_slots=tuple(ImageSlot.from_jsonable(s) for s in data.get("image_slots", ())),
            notes=data.get("notes"),
        )


@register_content
@dataclass(frozen=True)
class SlideDeckPlan:
    KIND = PLAN_SLIDES

    slides: tuple[Slide, ...] = ()

    def validate(self, path: str = "$") -> None:
        for i, slide in enumerate(self.slides):
            seen: set[str] = set()
            for j, block in enumerate(slide.blocks):
                validate_block(block, f"{path}.slides[{i}].blocks[{j}]")
                _require(block["type"] in ("paragraph", "bullet_list"), "slide blocks are paragraphs or bullet lists", f"{path}.slides[{i}].blocks[{j}].type")
            for j, slot in enumerate(slide.image_slots):
                _require(slot.slot_id not in seen, f"duplicate slot id {slot.slot_id!r}", f"{path}.slides[{i}].image_slots[{j}]")
                seen.add(slot.slot_id)
                slot.validate(f"{path}.slides[{i}].image_slots[{j}]")

    def to_jsonable(self) -> dict:
        return {"slides": [s.to_jsonable() for s in self.slides]}

    @classmethod
    def from_jsonable(cls, data: dict) -> "SlideDeckPlan":
        return cls(tuple(Slide.from_jsonable(s) for s in data.get("slides", ())))

    def image_hashes(self) -> list[str]:
        out = []
        for slide in self.slides:
            for slot in slide.image_slots:
                h = slot.current_hash()
                if h:
                    out.append(h)
        return out


# -- table plan -------------------------------------------------------------------

COLUMN_TYPES = ("text", "number", "currency")


@dataclass(frozen=True)
class Column:
    name: str
    type: str = "text"

    def to_jsonable(self) -> dict:
        return {"name": self.name, "type": self.type}

    @classmethod
    def from_jsonable(cls, data: dict) -> "Column":
        return cls(data["name"], data.get("type", "text"))


@dataclass(frozen=True)
class Group:
    label: str
    start: int
    end: int

    def to_jsonable(self) -> dict:
        return {"label": self.label, "start": self.start, "end": self.end}

    @classmethod
    def from_jsonable(cls, data: dict) -> "Group":
        return cls(data["label"], data["start"], data["end"])


def validate_cell(cell: Any, col: Column, path: str) -> None:
    if col.type == "text":
        _require(isinstance(cell, str), "text cell must be a string", path)
    elif col.type == "number":
        _require(isinstance(cell, (int, float)) and not isinstance(cell, bool), "number cell must be numeric", path)
        if isinstance(cell, float):
            _require(math.isfinite(cell), "number cell must be finite", path)
    elif col.type == "currency":
        _require(isinstance(cell, dict), "currency cell must be {amount, code}", path)
        _require(bool(_CURRENCY_RE.match(cell.get("code", ""))), "currency code must be 3 uppercase letters", f"{path}.code")
        try:
            Decimal(cell.get("amount", ""))
        except (InvalidOperation, TypeError):
            raise InvalidContent(f"currency amount must be a decimal string at {path}.amount", path=f"{path}.amount")


@register_content
@dataclass(frozen=True)
class TablePlan:
    KIND = PLAN_TABLE

    columns: tuple[Column, ...] = ()
    rows: tuple[tuple[Any, ...], ...] = ()
    groups: tuple[Group, ...] = ()

    def validate(self, path: str = "$") -> None:
        for i, col in enumerate(self.columns):
            _require(col.name != "", "column name must be non-empty", f"{path}.columns[{i}].name")
            _require(col.type in COLUMN_TYPES, f"column type must be one of {COLUMN_TYPES}", f"{path}.columns[{i}].type")
        for r, row in enumerate(self.rows):
            _require(len(row) == len(self.columns), "row length must equal column count", f"{path}.rows[{r}]")
            for c, cell in enumerate(row):
                validate_cell(cell, self.columns[c], f"{path}.rows[{r}][{c}]")
        for g, group in enumerate(self.groups):
            _require(group.label != "", "group label must be non-empty", f"{path}.groups[{g}].label")
            _require(0 <= group.start <= group.end < max(len(self.rows), 1), "group range out of bounds", f"{path}.groups[{g}]")

    def to_jsonable(self) -> dict:
        return {
            "columns": [c.to_jsonable() for c in self.columns],
            "rows": [list(r) for r in self.rows],
            "groups": [g.to_jsonable() for g in self.groups],
        }

    @classmethod
    def from_jsonable(cls, data: dict) -> "TablePlan":
        return cls(
            columns=tuple(Column.from_jsonable(c) for c in data.get("columns", ())),
            rows=tuple(tuple(r) for r in data.get("rows", ())),
            groups=tuple(Group.from_jsonable(g) for g in data.get("groups", ())),
        )


# -- artifacts --------------------------------------------------------------------

_SAFE_PATH_RE = re.compile(r"^[A-Za-z0-9._/-]+$")


@register_content
@dataclass(frozen=True)
class Artifact:
    KIND = ARTIFACT

    name: str
    files: tuple[tuple[str, str], ...] = ()  # (relative path, blob hash), sorted by path
    manifest: dict = field(default_factory=dict)

    def validate(self, path: str = "$") -> None:
        _require(self.name != "", "artifact name must be non-empty", f"{path}.name")
        paths = [p for p, _ in self.files]
        _require(paths == sorted(paths), "artifact files must be sorted by path", f"{path}.files")
        _require(len(set(paths)) == len(paths), "artifact file paths must be unique", f"{path}.files")
        for i, (rel, digest) in enumerate(self.files):
            _require(bool(_SAFE_PATH_RE.match(rel)) and ".." not in rel and not rel.startswith("/"), "unsafe artifact path", f"{path}.files[{i}]")
            _require(bool(_HASH_RE.match(digest)), "artifact file hash must be sha256 hex", f"{path}.files[{i}]")

    def to_jsonable(self) -> dict:
        return {"name": self.name, "files": {p: h for p, h in self.files}, "manifest": self.manifest}

    @classmethod
    def from_jsonable(cls, data: dict) -> "Artifact":
        files = tuple(sorted(data.get("files", {}).items()))
        return cls(name=data["name"], files=files, manifest=dict(data.get("manifest", {})))

    def file_map(self) -> dict[str, str]:
        return {p: h for p, h in self.files}
