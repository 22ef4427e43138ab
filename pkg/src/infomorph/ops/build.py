"""Transduce builders: plans out, portable artifacts in standard formats.

document -> Markdown (CommonMark subset) + manifest
table    -> CSV (RFC 4180: CRLF, UTF-8, header row) + optional minimal .xlsx
slides   -> slide bundle (deck.json + images/)

A template blob, when provided, must parse as a JSON object of named style
parameters; they are recorded in the artifact manifest. Builders are byte
deterministic given (plan, template): goldens stay stable across runs.
"""

from __future__ import annotations

import json

from infomorph.content.canonical import canonical_bytes
from infomorph.content.model import (
    Artifact,
    DocumentPlan,
    SlideDeckPlan,
    TablePlan,
)
from infomorph.errors import EmptyInput, TemplateInvalid, UnresolvedImage
from infomorph.ops.xlsx import write_xlsx
from infomorph.store.blobs import BlobStore

DECK_SCHEMA_VERSION = 1
MANIFEST_SCHEMA_VERSION = 1


def _style_params(template: bytes | None) -> dict:
    if template is None:
        return {}
    try:
        params = json.loads(template.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise TemplateInvalid(f"template must be a JSON object of style parameters: {exc}") from exc
    if not isinstance(params, dict):
        raise TemplateInvalid("template must be a JSON object of style parameters")
    return params


def render_markdown(plan: DocumentPlan) -> str:
    parts: list[str] = []
    for section in plan.sections:
        parts.append(f"# {section.heading}")
        for block in section.blocks:
            btype = block["type"]
            if btype == "paragraph":
                parts.append(block["text"])
            elif btype == "bullet_list":
                parts.append("\n".join(f"- {item}" for item in block["items"]))
            elif btype == "image_ref":
                parts.append(f"![image](images/{block['hash']}.png)")
            elif btype == "citation":
                parts.append(f"> source: {block['doc_id']} p.{block['page']}")
            elif btype == "table_ref":
                parts.append(f"[table: {block['ref']}]")
    return "\n\n".join(parts) + "\n"


def _csv_field(value) -> str:
    if isinstance(value, dict):  # currency cell
        text = f"{value.get('amount', '')} {value.get('code', '')}".strip()
    elif isinstance(value, float):
        text = repr(value)
    else:
        text = str(value)
    if any(ch in text for ch in (",", '"', "\r", "\n")):
        return '"' + text.replace('"', '""') + '"'
    return text


def render_csv(plan: TablePlan) -> bytes:
    records = [[c.name for c in plan.columns]] + [list(r) for r in plan.rows]
    lines = [",".join(_csv_field(v) for v in record) for record in records]
    return ("\r\n".join(lines) + "\r\n").encode("utf-8")


def _deck_json(plan: SlideDeckPlan) -> bytes:
    return canonical_bytes({"schema_version": DECK_SCHEMA_VERSION, "deck": plan.to_jsonable()})


def build(
    kind: str,
    plan,
    template: bytes | None = None,
    blobs: BlobStore | None = None,
    enable_xlsx: bool = False,
) -> Artifact:
    if blobs is None:
        blobs = BlobStore(None)
    style = _style_params(template)

    if kind == "document":
        if not isinstance(plan, DocumentPlan):
            raise EmptyInput("document builder takes a document plan")
        files: dict[str, str] = {}
        for section in plan.sections:
            for block in section.blocks:
                if block.get("type") == "image_ref":
                    digest = block["hash"]
                    if not blobs.has(digest):
                        raise UnresolvedImage(f"image {digest[:12]}… not in blob store")
                    files[f"images/{digest}.png"] = digest
        files["document.md"] = blobs.put(render_markdown(plan).encode("utf-8"))
        manifest = {
            "schema_version": MANIFEST_SCHEMA_VERSION,
            "format": "markdown",
            "sections": len(plan.sections),
            "style": style,
        }
        return _artifact("document", files, manifest)

    if kind == "table":
        if not isinstance(plan, TablePlan):
            raise EmptyInput("table builder takes a table plan")
        files = {"table.csv": blobs.put(render_csv(plan))}
        if enable_xlsx:
            files["table.xlsx"] = blobs.put(write_xlsx(plan))
        manifest = {
            "schema_version": MANIFEST_SCHEMA_VERSION,
            "format": "csv",
            "columns": [c.name for c in plan.columns],
            "rows": len(plan.rows),
            "style": style,
        }
        return _artifact("table", files, manifest)

    if kind == "slides":
        if not isinstance(plan, SlideDeckPlan):
            raise EmptyInput("slide builder takes a slide deck plan")
        files = {}
        for digest in plan.image_hashes():
            if not blobs.has(digest):
                raise UnresolvedImage(f"image {digest[:12]}… not in blob store")
            files[f"images/{digest}.png"] = digest
        files["deck.json"] = blobs.put(_deck_json(plan))
        manifest = {
            "schema_version": MANIFEST_SCHEMA_VERSION,
            "format": "deck",
            "slides": len(plan.slides),
            "style": style,
        }
        return _artifact("slides", files, manifest)

    raise EmptyInput(f"unknown build kind {kind!r}")


def _artifact(name: str, files: dict[str, str], manifest: dict) -> Artifact:
    artifact = Artifact(name=name, files=tuple(sorted(files.items())), manifest=manifest)
    artifact.validate()
    return artifact
