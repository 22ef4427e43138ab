"""Deterministic mock provider.

Every operation is a pure function of its inputs: identical calls yield
identical bytes across runs and platforms, with zero network access. The
rules are intentionally extractive/templated rather than clever — outputs
must be assertable by hand. All rules are documented in docs/mock-provider.md.
"""

from __future__ import annotations

import hashlib
import json
import math
import re
from collections import Counter
from decimal import Decimal
from typing import Any

from infomorph.errors import ContextOverflow, EmptyInput, MissingBlob, UnsupportedMode
from infomorph.providers import prompts
from infomorph.providers.base import (
    CONTEXT_BYTE_BUDGET,
    DEFAULT_TAU,
    EMBED_MODES,
    EmbeddingVector,
    Judgment,
    Provider,
    coerce_embed_item,
    judgment_from_score,
)
from infomorph.providers.png import solid_png
from infomorph.providers.tokens import (
    content_tokens,
    extractive_sentence,
    overlap_score,
    sentences,
    tokens,
)
from infomorph.store.blobs import BlobStore

DIM = 256

_MONEY_RE = re.compile(r"\$\s?(\d+(?:\.\d{1,2})?)|(\d+(?:\.\d{1,2})?)\s?USD\b", re.IGNORECASE)
_COLUMNS_RE = re.compile(r"columns?\s*:\s*([^.\n]+)", re.IGNORECASE)
_CURRENCY_CODE_RE = re.compile(r"\(([A-Z]{3})\)")

MAX_TABLE_ROWS = 12
MAX_SLIDE_BULLETS = 3
CHAT_TAU = DEFAULT_TAU


def _bucket_and_sign(token: str) -> tuple[int, int]:
    digest = hashlib.sha256(token.encode("utf-8")).digest()
    bucket = int.from_bytes(digest[:4], "big") % DIM
    sign = 1 if digest[4] & 1 else -1
    return bucket, sign


def _normalize(vec: list[float]) -> EmbeddingVector:
    norm = math.sqrt(sum(v * v for v in vec))
    if norm == 0.0:
        return tuple(0.0 for _ in range(DIM))
    return tuple(v / norm for v in vec)


def text_vector_raw(text: str) -> list[float]:
    """Signed feature hashing of token frequencies into DIM buckets."""
    vec = [0.0] * DIM
    for token, count in Counter(tokens(text)).items():
        bucket, sign = _bucket_and_sign(token)
        vec[bucket] += sign * count
    return vec


def image_vector_raw(data: bytes) -> list[float]:
    vec = [0.0] * DIM
    for byte in data:
        vec[byte] += 1.0
    return vec


class MockProvider(Provider):
    provider_id = "mock"

    def __init__(self, blobs: BlobStore | None = None):
        self.blobs = blobs if blobs is not None else BlobStore(None)

    # -- completion -------------------------------------------------------

    def complete(self, model: str, system: str, context: list[str], prompt: str) -> str:
        if not prompt:
            raise EmptyInput("prompt must be non-empty")
        if sum(len(c.encode("utf-8")) for c in context) > CONTEXT_BYTE_BUDGET:
            raise ContextOverflow(f"context exceeds {CONTEXT_BYTE_BUDGET} bytes")
        task = prompts.extract_task(prompt)
        if task == prompts.TASK_PAGE_SUMMARY:
            text = context[0] if context else ""
            return extractive_sentence(text)
        if task == prompts.TASK_DOC_SUMMARY:
            return extractive_sentence(" ".join(context))
        if task == prompts.TASK_SCOPED_CHAT:
            return self._chat(prompt, context)
        if task == prompts.TASK_PLAN_TABLE:
            return self._plan_table(prompt, context)
        if task == prompts.TASK_PLAN_DOCUMENT:
            return self._plan_document(prompt, context)
        if task == prompts.TASK_PLAN_SLIDES:
            return self._plan_slides(prompt, context)
        # Free-form fallback: echo the prompt directives plus the extractive
        # selection over the whole context, so untemplated calls stay pure.
        return (prompt.splitlines()[0] + " :: " + extractive_sentence(" ".join(context))).strip()

    def _chat(self, prompt: str, context: list[str]) -> str:
        question = prompts.extract_directive(prompt, "QUESTION")
        refs = [r for r in prompts.parse_context_refs(context) if r.get("type") == "page"]
        scored = []
        for ref in refs:
            score, _, _ = overlap_score(ref.get("text", ""), question)
            if score >= CHAT_TAU:
                scored.append((score, ref))
        if not scored:
            return "no relevant content"
        scored.sort(key=lambda item: (-item[0], item[1].get("index", 0)))
        top = scored[0][1]
        q_tokens = set(content_tokens(question))
        answer = ""
        for sent in sentences(top.get("text", "")):
            if set(content_tokens(sent)) & q_tokens:
                answer = sent
                break
        if not answer:
            answer = extractive_sentence(top.get("text", ""))
        citations = "".join(f"[p{ref.get('index')}]" for _, ref in scored)
        return f"{answer} {citations}".strip()

    # -- plan generation ----------------------------------------------------

    def _plan_table(self, prompt: str, context: list[str]) -> str:
        user_prompt = prompts.extract_user_prompt(prompt)
        columns = _parse_columns(user_prompt)
        rows: list[list[Any]] = []
        for ref in prompts.parse_context_refs(context):
            if ref.get("type") != "page":
                continue
            for sent in sentences(ref.get("text", "")):
                match = _MONEY_RE.search(sent)
                if not match:
                    continue
                amount = match.group(1) or match.group(2)
                item = sent[: match.start()].strip(" -—:;,$")
                words = item.split()
                item = " ".join(words[:6]) if words else " ".join(sent.split()[:6])
                note = f"{ref.get('doc_id', '')} p{ref.get('index')}"
                rows.append(_project_row(columns, item, amount, note))
                if len(rows) >= MAX_TABLE_ROWS:
                    break
            if len(rows) >= MAX_TABLE_ROWS:
                break
        out_columns = [{"name": c["name"], "type": c["type"]} for c in columns]
        return json.dumps({"columns": out_columns, "rows": rows, "groups": []}, sort_keys=True, ensure_ascii=False)

    def _plan_document(self, prompt: str, context: list[str]) -> str:
        refs = prompts.parse_context_refs(context)
        prior_plans = [r for r in refs if r.get("type") == "plan" and r.get("kind") == "plan:document"]
        pages = [r for r in refs if r.get("type") == "page"]
        sections: list[dict] = []
        if prior_plans:
            seen = set()
            for plan in prior_plans:
                for section in plan.get("body", {}).get("sections", []):
                    if section.get("heading") in seen:
                        continue
                    seen.add(section.get("heading"))
                    sections.append({"heading": section.get("heading"), "blocks": list(section.get("blocks", []))})
            for page in pages:
                idx = _assign_section(sections, page)
                sections[idx]["blocks"].extend(_page_blocks(page))
        else:
            by_doc: dict[str, dict] = {}
            for page in pages:
                doc_id = page.get("doc_id", "")
                if doc_id not in by_doc:
                    heading = page.get("title") or doc_id or "Notes"
                    by_doc[doc_id] = {"heading": heading, "blocks": []}
                    sections.append(by_doc[doc_id])
                by_doc[doc_id]["blocks"].extend(_page_blocks(page))
        if not sections:
            sections = [{"heading": "Notes", "blocks": []}]
        return json.dumps({"sections": sections}, sort_keys=True, ensure_ascii=False)

    def _plan_slides(self, prompt: str, context: list[str]) -> str:
        user_prompt = prompts.extract_user_prompt(prompt)
        title_sents = sentences(user_prompt)
        title = (title_sents[0] if title_sents else "Untitled deck")[:60]
        slides = [
            {"title": title, "blocks": [], "image_slots": [{"slot_id": "title-image", "state": {"state": "empty"}}]}
        ]
        groups: dict[str, dict] = {}
        order: list[str] = []
        for ref in prompts.parse_context_refs(context):
            if ref.get("type") == "plan":
                body = ref.get("body", {})
                for section in body.get("sections", [])[:MAX_SLIDE_BULLETS]:
                    items = [
                        b.get("text", "")
                        for b in section.get("blocks", [])
                        if b.get("type") == "paragraph"
                    ][:MAX_SLIDE_BULLETS]
                    slides.append(
                        {
                            "title": section.get("heading", "Section"),
                            "blocks": [{"type": "bullet_list", "items": items}] if items else [],
                            "image_slots": [{"slot_id": "img-0", "state": {"state": "empty"}}],
                        }
                    )
                continue
            if ref.get("type") != "page":
                continue
            doc_id = ref.get("doc_id", "")
            if doc_id not in groups:
                groups[doc_id] = {"title": ref.get("title") or doc_id, "bullets": [], "image": None}
                order.append(doc_id)
            group = groups[doc_id]
            if len(group["bullets"]) < MAX_SLIDE_BULLETS:
                group["bullets"].append(extractive_sentence(ref.get("text", ""), limit=160))
            if group["image"] is None and ref.get("image_refs"):
                group["image"] = ref["image_refs"][0]
        for doc_id in order:
            group = groups[doc_id]
            slot_state = (
                {"state": "sourced", "hash": group["image"]} if group["image"] else {"state": "empty"}
            )
            slides.append(
                {
                    "title": group["title"],
                    "blocks": [{"type": "bullet_list", "items": group["bullets"]}],
                    "image_slots": [{"slot_id": "img-0", "state": slot_state}],
                    "notes": f"source: {doc_id}",
                }
            )
        return json.dumps({"slides": slides}, sort_keys=True, ensure_ascii=False)

    # -- embeddings ---------------------------------------------------------

    def embed(self, mode: str, items: list[Any]) -> list[EmbeddingVector]:
        if mode not in EMBED_MODES:
            raise UnsupportedMode(f"mode must be one of {EMBED_MODES}")
        if not items:
            raise EmptyInput("nothing to embed")
        out = []
        for raw_item in items:
            item = coerce_embed_item(raw_item)
            vec = [0.0] * DIM
            if mode in ("text", "multimodal"):
                for i, v in enumerate(text_vector_raw(item["text"])):
                    vec[i] += v
            if mode in ("image", "multimodal"):
                for ref in item["image_refs"]:
                    data = self.blobs.get(ref)
                    for i, v in enumerate(image_vector_raw(data)):
                        vec[i] += v
            out.append(_normalize(vec))
        return out

    # -- relevance ----------------------------------------------------------

    def judge(self, model: str, page: Any, extraction_prompt: str, tau: float = DEFAULT_TAU) -> Judgment:
        text = getattr(page, "text", None)
        if text is None and isinstance(page, dict):
            text = page.get("text", "")
        image_refs = getattr(page, "image_refs", ()) or (page.get("image_refs", ()) if isinstance(page, dict) else ())
        if not text and not image_refs:
            raise EmptyInput("page has neither text nor images")
        score, matched, negated = overlap_score(text or "", extraction_prompt)
        if matched or negated:
            rationale = "matched: " + ", ".join(matched) if matched else "matched: (none)"
            if negated:
                rationale += "; negated: " + ", ".join(negated)
        else:
            rationale = "no keyword overlap"
        return judgment_from_score(score, tau, rationale)

    # -- images ---------------------------------------------------------------

    def generate_image(self, model: str, prompt: str) -> str:
        if not prompt:
            raise EmptyInput("image prompt must be non-empty")
        digest = hashlib.sha256(prompt.encode("utf-8")).digest()
        rgb = (digest[0], digest[1], digest[2])
        label = f"gen:{digest[:6].hex()}"
        return self.blobs.put(solid_png(rgb, label))

    def restyle_image(self, model: str, source: str, prompt: str) -> str:
        if not prompt:
            raise EmptyInput("image prompt must be non-empty")
        if not self.blobs.has(source):
            raise MissingBlob(f"restyle source {source[:12]}… not in blob store")
        data = self.blobs.get(source)
        histogram = bytes(int(v) % 256 for v in image_vector_raw(data))
        seed = hashlib.sha256(histogram).digest()
        pdigest = hashlib.sha256(prompt.encode("utf-8")).digest()
        rgb = (pdigest[0] ^ seed[0], pdigest[1] ^ seed[1], pdigest[2] ^ seed[2])
        label = f"restyle:{source[:12]}:{pdigest[:6].hex()}"
        return self.blobs.put(solid_png(rgb, label))


# -- table helpers -----------------------------------------------------------

def _parse_columns(user_prompt: str) -> list[dict]:
    match = _COLUMNS_RE.search(user_prompt)
    names: list[str] = []
    if match:
        for part in match.group(1).split(","):
            part = part.strip()
            if part.lower().startswith("and "):
                part = part[4:].strip()
            part = part.rstrip(".").strip()
            if part:
                names.append(part)
    if not names:
        names = ["Item", "Notes"]
    columns = []
    for name in names:
        lowered = name.lower()
        code = _CURRENCY_CODE_RE.search(name)
        if code or any(cue in lowered for cue in ("cost", "price", "amount", "fee")):
            columns.append({"name": name, "type": "currency", "_code": code.group(1) if code else "USD"})
        elif any(cue in lowered for cue in ("count", "quantity", "number", "qty")):
            columns.append({"name": name, "type": "number"})
        else:
            columns.append({"name": name, "type": "text"})
    return columns


def _project_row(columns: list[dict], item: str, amount: str, note: str) -> list[Any]:
    normalized = str(Decimal(amount).quantize(Decimal("0.01")))
    row: list[Any] = []
    text_seen = 0
    for col in columns:
        if col["type"] == "currency":
            row.append({"amount": normalized, "code": col.get("_code", "USD")})
        elif col["type"] == "number":
            value = Decimal(amount)
            row.append(int(value) if value == value.to_integral_value() else float(value))
        else:
            row.append(item if text_seen == 0 else note)
            text_seen += 1
    return row


def _page_blocks(page: dict) -> list[dict]:
    return [
        {"type": "paragraph", "text": extractive_sentence(page.get("text", ""))},
        {"type": "citation", "doc_id": page.get("doc_id", ""), "page": page.get("index", 1)},
    ]


def _assign_section(sections: list[dict], page: dict) -> int:
    """Best keyword-overlap section for a page; ties and zero go to the first."""
    page_tokens = set(content_tokens(page.get("text", "")))
    best, best_score = 0, 0
    for i, section in enumerate(sections):
        score = len(page_tokens & set(content_tokens(section.get("heading", ""))))
        if score > best_score:
            best, best_score = i, score
    return best
