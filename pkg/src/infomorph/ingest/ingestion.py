"""Turn files and URLs into enriched Documents.

Ingestion assigns content-derived doc ids (first 12 hex of the raw-bytes
sha256) so page references stay stable pointers to immutable content.
Enrichment adds per-page summaries + embeddings and a whole-document summary,
cached by (page content hash, provider, model, template version) so repeat
enrichment makes zero provider calls.
"""

from __future__ import annotations

import hashlib
import json
import math
import re
import warnings
from pathlib import Path

import httpx

from infomorph.content.canonical import canonical_bytes, sha256_hex
from infomorph.content.model import Document, Page
from infomorph.errors import (
    EngineError,
    FetchError,
    IngestWarning,
    NoContent,
    NotText,
    ParseError,
    ProviderUnavailable,
)
from infomorph.ingest.adapters import Parsed, detect_media_kind, parse_bytes
from infomorph.ingest.chunking import chunk_text
from infomorph.ingest.htmltext import extract_main_text
from infomorph.providers import prompts
from infomorph.providers.base import DEFAULT_MODEL, Provider
from infomorph.providers.tokens import normalize_whitespace
from infomorph.store.blobs import BlobStore
from infomorph.store.cache import Cache

MAX_FETCH_BYTES = 10 * 1024 * 1024
FETCH_TIMEOUT = 10.0
CHAT_RETRIEVE_K = 4


def _doc_id(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()[:12]


class Ingestor:
    def __init__(self, blobs: BlobStore, cache: Cache | None = None):
        self.blobs = blobs
        self.cache = cache

    # -- files -------------------------------------------------------------

    def ingest_file(self, path: str, media_kind: str | None = None) -> Document:
        source = Path(path)
        try:
            data = source.read_bytes()
        except OSError as exc:
            raise ParseError(f"cannot read {path}: {exc}") from exc
        kind = media_kind or detect_media_kind(source.name)
        parsed = parse_bytes(data, kind, name=source.stem)
        return self._build_document(parsed, kind, origin=str(source), raw=data)

    # -- urls ----------------------------------------------------------------

    def ingest_url(self, url: str) -> Document:
        try:
            response = httpx.get(url, timeout=FETCH_TIMEOUT, follow_redirects=True)
        except httpx.HTTPError as exc:
            raise FetchError(0, f"fetch failed: {exc}") from exc
        if response.status_code != 200:
            raise FetchError(response.status_code)
        content_type = response.headers.get("content-type", "").split(";")[0].strip().lower()
        if not (content_type.startswith("text/") or content_type in ("application/xhtml+xml", "")):
            raise NotText(f"unsupported content type {content_type!r}")
        body = response.content
        if len(body) > MAX_FETCH_BYTES:
            raise NotText(f"body exceeds {MAX_FETCH_BYTES} bytes")
        if content_type == "text/html" or content_type == "application/xhtml+xml":
            text, title = extract_main_text(body.decode("utf-8", errors="replace"))
        else:
            text, title = normalize_whitespace(body.decode("utf-8", errors="replace")), ""
        chunks = chunk_text(text)
        if not chunks:
            warnings.warn(f"url {url} produced an empty document", IngestWarning)
        pages = [Page(index=i + 1, text=chunk) for i, chunk in enumerate(chunks)]
        doc = Document(
            doc_id=_doc_id(body or url.encode("utf-8")),
            origin=url,
            media_kind="html",
            title=title or url,
            pages=tuple(pages),
        )
        doc.validate()
        return doc

    def _build_document(self, parsed: Parsed, media_kind: str, origin: str, raw: bytes) -> Document:
        pages = []
        for i, raw_page in enumerate(parsed.pages):
            refs = tuple(self.blobs.put(img) for img in raw_page.images)
            pages.append(Page(index=i + 1, text=raw_page.text, image_refs=refs))
        title = parsed.title or Path(origin).stem
        doc = Document(
            doc_id=_doc_id(raw),
            origin=origin,
            media_kind=media_kind,
            title=title,
            pages=tuple(pages),
            author=parsed.author,
            created_at=parsed.created_at,
        )
        doc.validate()
        return doc

    # -- enrichment -------------------------------------------------------------

    def _embed_mode(self, doc: Document, page: Page) -> str:
        if doc.media_kind == "image":
            return "image"
        if page.image_refs and page.text:
            return "multimodal"
        if page.image_refs and not page.text:
            return "image"
        return "text"

    def _enrich_key(self, op: str, payload: dict, provider: Provider, model: str) -> str:
        return sha256_hex(
            canonical_bytes(
                {
                    "op": op,
                    "payload": payload,
                    "provider": provider.provider_id,
                    "model": model,
                    "templates": prompts.TEMPLATES_VERSION,
                }
            )
        )

    def _cached(self, key: str) -> dict | None:
        if self.cache is None:
            return None
        digest = self.cache.get(key)
        if digest is None:
            return None
        return json.loads(self.blobs.get(digest).decode("utf-8"))

    def _store(self, key: str, record: dict) -> None:
        if self.cache is None:
            return
        data = canonical_bytes(record)
        self.cache.put(key, sha256_hex(data), data)

    def enrich(self, doc: Document, provider: Provider, model: str = DEFAULT_MODEL) -> Document:
        if not doc.pages:
            return doc
        new_pages: list[Page] = []
        for page in doc.pages:
            if page.summary is not None and page.embedding is not None:
                new_pages.append(page)
                continue
            mode = self._embed_mode(doc, page)
            payload = {"text": page.text, "image_refs": list(page.image_refs), "mode": mode}
            key = self._enrich_key("enrich-page", payload, provider, model)
            record = self._cached(key)
            if record is None:
                try:
                    summary = provider.complete(model, "", [page.text], prompts.page_summary_prompt())
                    vector = provider.embed(mode, [{"text": page.text, "image_refs": list(page.image_refs)}])[0]
                except ProviderUnavailable as exc:
                    warnings.warn(f"page {page.index} enrichment failed: {exc}", IngestWarning)
                    new_pages.append(page)
                    continue
                record = {"summary": summary[:480], "embedding": list(vector)}
                self._store(key, record)
            new_pages.append(
                Page(
                    index=page.index,
                    text=page.text,
                    image_refs=page.image_refs,
                    summary=record["summary"],
                    embedding=tuple(float(v) for v in record["embedding"]),
                )
            )
        summary = doc.summary
        if summary is None:
            key = self._enrich_key("enrich-doc", {"pages": [p.text for p in doc.pages]}, provider, model)
            record = self._cached(key)
            if record is None:
                try:
                    text = provider.complete(model, "", [p.text for p in doc.pages], prompts.doc_summary_prompt())
                    record = {"summary": text[:480]}
                    self._store(key, record)
                except ProviderUnavailable as exc:
                    warnings.warn(f"document summary failed: {exc}", IngestWarning)
                    record = None
            if record is not None:
                summary = record["summary"]
        enriched = doc.with_pages(tuple(new_pages), summary=summary)
        enriched.validate()
        return enriched


def cosine(a: tuple[float, ...], b: tuple[float, ...]) -> float:
    dot = sum(x * y for x, y in zip(a, b))
    na = math.sqrt(sum(x * x for x in a))
    nb = math.sqrt(sum(y * y for y in b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return dot / (na * nb)


def scoped_chat(
    doc: Document,
    question: str,
    provider: Provider,
    history: list[dict] | None = None,
    model: str = DEFAULT_MODEL,
) -> dict:
    """Sandboxed Q&A: retrieval and context are restricted to this document."""
    if not doc.pages:
        raise NoContent(f"document {doc.doc_id} has no pages")
    embedded = [p for p in doc.pages if p.embedding is not None]
    if not embedded:
        raise EngineError(f"document {doc.doc_id} is not enriched", path="$.pages")
    query_vec = provider.embed("text", [question])[0]
    ranked = sorted(embedded, key=lambda p: (-cosine(query_vec, p.embedding), p.index))
    top = ranked[:CHAT_RETRIEVE_K]
    context = [prompts.page_ref(doc.doc_id, p.index, p.text, doc.title) for p in top]
    answer = provider.complete(model, "", context, prompts.scoped_chat_prompt(question, history or []))
    cited: list[int] = []
    for match in re.finditer(r"\[p(\d+)\]", answer):
        index = int(match.group(1))
        if 1 <= index <= doc.page_count and index not in cited:
            cited.append(index)
    return {"answer": answer, "cited_pages": cited}
