"""Evaluator registry: one evaluator per node kind.

Evaluators are pure functions of (config, input content, provider); stores
are read-only. Source evaluators verify the stored document still matches the
content hash recorded in their config, so a silently swapped document can
never be served under a stale fingerprint.
"""

from __future__ import annotations

from infomorph.content.model import (
    Document,
    DocumentPlan,
    PageRef,
    PageSet,
    SlideDeckPlan,
    TablePlan,
    page_set_from,
)
from infomorph.content.patch import apply_patch
from infomorph.errors import EmptyInput, EngineError
from infomorph.graph.engine import EvalContext, EvaluatorRegistry
from infomorph.graph.kinds import NodeKind
from infomorph.ops.build import build
from infomorph.ops.extract import ExtractorConfig, extract_relevant
from infomorph.ops.plans import plan
from infomorph.providers.base import DEFAULT_MODEL
from infomorph.store.blobs import BlobStore


def _eval_source(ctx: EvalContext) -> Document:
    doc_id = ctx.config.get("doc_id")
    if not doc_id:
        raise EmptyInput("source node config needs a doc_id")
    doc = ctx.docs.load(doc_id)
    expected = ctx.config.get("content_hash")
    if expected:
        from infomorph.content.canonical import canonicalize, sha256_hex

        actual = sha256_hex(canonicalize(doc))
        if actual != expected:
            raise EngineError(
                f"document {doc_id} changed since the source node was configured "
                f"(stored {actual[:12]}…, expected {expected[:12]}…)"
            )
    return doc


def _eval_preview(ctx: EvalContext) -> PageSet:
    value = ctx.inputs[0]
    if isinstance(value, PageSet):
        return value
    if isinstance(value, Document):
        refs = [
            PageRef(doc_id=value.doc_id, index=p.index, score=1.0, rationale="source page")
            for p in value.pages
        ]
        return page_set_from(refs)
    raise EmptyInput(f"page preview cannot take {type(value).__name__}")


def _eval_extractor(ctx: EvalContext) -> PageSet:
    docs = [v for v in ctx.inputs if isinstance(v, Document)]
    cfg = ExtractorConfig.from_config(ctx.config)
    return extract_relevant(docs, cfg, ctx.provider)


def _planner(kind: str):
    def _eval(ctx: EvalContext):
        prompt = ctx.config.get("planning_prompt", "")
        model = ctx.config.get("model", DEFAULT_MODEL)
        return plan(kind, ctx.inputs, prompt, ctx.provider, ctx.docs, model=model)

    return _eval


def _viewer(plan_type):
    def _eval(ctx: EvalContext):
        value = ctx.inputs[0]
        if not isinstance(value, plan_type):
            raise EmptyInput(f"viewer expected {plan_type.__name__}, got {type(value).__name__}")
        ops = ctx.config.get("patch", [])
        return apply_patch(value, ops) if ops else value

    return _eval


def _builder(kind: str):
    def _eval(ctx: EvalContext):
        plan_value = ctx.inputs[0]
        template: bytes | None = None
        if len(ctx.inputs) > 1:  # optional template artifact on port 1
            files = ctx.inputs[1].file_map()
            digest = files.get("template.json") or (files[sorted(files)[0]] if files else None)
            if digest is not None:
                template = ctx.blobs.get(digest)
        if template is None and ctx.config.get("template_ref"):
            template = ctx.blobs.get(ctx.config["template_ref"])
        return build(
            kind,
            plan_value,
            template=template,
            blobs=ctx.blobs,
            enable_xlsx=bool(ctx.config.get("xlsx", False)),
        )

    return _eval


def build_registry(blobs: BlobStore, docs) -> EvaluatorRegistry:
    evaluators = {
        NodeKind.FILE_SOURCE: _eval_source,
        NodeKind.URL_SOURCE: _eval_source,
        NodeKind.PAGE_PREVIEW: _eval_preview,
        NodeKind.RELEVANT_PAGE_EXTRACTOR: _eval_extractor,
        NodeKind.DOCUMENT_PLANNER: _planner("document"),
        NodeKind.SLIDE_DECK_PLANNER: _planner("slides"),
        NodeKind.SPREADSHEET_PLANNER: _planner("table"),
        NodeKind.DOCUMENT_EDITOR: _viewer(DocumentPlan),
        NodeKind.SLIDE_DECK_VIEWER: _viewer(SlideDeckPlan),
        NodeKind.SPREADSHEET_VIEWER: _viewer(TablePlan),
        NodeKind.DOCUMENT_BUILDER: _builder("document"),
        NodeKind.SLIDE_DECK_BUILDER: _builder("slides"),
        NodeKind.SPREADSHEET_BUILDER: _builder("table"),
    }
    return EvaluatorRegistry(evaluators, blobs, docs)
