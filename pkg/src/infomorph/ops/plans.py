"""Gather planning: provider-backed structured plan generation.

The provider is asked for JSON matching the plan schema; a parse failure is
retried once with a repair prompt. Generated citations and sourced image
references must resolve against the inputs — dangling ones are dropped with a
warning rather than failing the plan.
"""

from __future__ import annotations

import json
import warnings

from infomorph.content.model import (
    PLAN_DOCUMENT,
    PLAN_SLIDES,
    PLAN_TABLE,
    Document,
    DocumentPlan,
    ImageSlot,
    PageSet,
    Section,
    Slide,
    SlideDeckPlan,
    TablePlan,
)
from infomorph.errors import DanglingRefWarning, EmptyInput, InvalidContent, PlanParseError, UnknownId
from infomorph.providers import prompts
from infomorph.providers.base import DEFAULT_MODEL, Provider

_TASKS = {
    "document": prompts.TASK_PLAN_DOCUMENT,
    "slides": prompts.TASK_PLAN_SLIDES,
    "table": prompts.TASK_PLAN_TABLE,
}

_PARSERS = {
    "document": DocumentPlan.from_jsonable,
    "slides": SlideDeckPlan.from_jsonable,
    "table": TablePlan.from_jsonable,
}


def _context_refs(inputs: list, docs) -> list[str]:
    refs: list[str] = []
    for value in inputs:
        if isinstance(value, PageSet):
            for entry in value.entries:
                title, text, images = "", "", []
                try:
                    doc = docs.load(entry.doc_id)
                    page = doc.page(entry.index)
                    title, text, images = doc.title, page.text, list(page.image_refs)
                except (UnknownId, InvalidContent):
                    warnings.warn(
                        f"page ref {entry.doc_id} p{entry.index} does not resolve", DanglingRefWarning
                    )
                    continue
                ref = json.loads(prompts.page_ref(entry.doc_id, entry.index, text, title))
                ref["image_refs"] = images
                refs.append(json.dumps(ref, sort_keys=True, ensure_ascii=False))
        elif isinstance(value, (DocumentPlan, SlideDeckPlan, TablePlan)):
            refs.append(prompts.plan_ref(value.KIND, value.to_jsonable()))
        elif isinstance(value, Document):
            for page in value.pages:
                refs.append(prompts.page_ref(value.doc_id, page.index, page.text, value.title))
        else:
            raise EmptyInput(f"planner cannot take {type(value).__name__} as input")
    return refs


def _allowed_citations(inputs: list) -> set[tuple[str, int]]:
    allowed: set[tuple[str, int]] = set()
    for value in inputs:
        if isinstance(value, PageSet):
            allowed.update((e.doc_id, e.index) for e in value.entries)
        elif isinstance(value, DocumentPlan):
            allowed.update(value.citations())
        elif isinstance(value, Document):
            allowed.update((value.doc_id, p.index) for p in value.pages)
    return allowed


def _allowed_images(inputs: list, docs) -> set[str]:
    allowed: set[str] = set()
    for value in inputs:
        if isinstance(value, PageSet):
            for entry in value.entries:
                try:
                    allowed.update(docs.load(entry.doc_id).page(entry.index).image_refs)
                except (UnknownId, InvalidContent):
                    continue
        elif isinstance(value, SlideDeckPlan):
            allowed.update(value.image_hashes())
        elif isinstance(value, Document):
            for page in value.pages:
                allowed.update(page.image_refs)
    return allowed


def _drop_dangling_citations(plan: DocumentPlan, allowed: set[tuple[str, int]]) -> DocumentPlan:
    sections = []
    for section in plan.sections:
        blocks = []
        for block in section.blocks:
            if block.get("type") == "citation" and (block.get("doc_id"), block.get("page")) not in allowed:
                warnings.warn(
                    f"dropping citation to {block.get('doc_id')} p{block.get('page')}: not among the inputs",
                    DanglingRefWarning,
                )
                continue
            blocks.append(block)
        sections.append(Section(section.heading, tuple(blocks)))
    return DocumentPlan(tuple(sections))


def _drop_dangling_images(plan: SlideDeckPlan, allowed: set[str]) -> SlideDeckPlan:
    slides = []
    for slide in plan.slides:
        slots = []
        for slot in slide.image_slots:
            if slot.state.get("state") == "sourced" and slot.state.get("hash") not in allowed:
                warnings.warn(f"resetting slot {slot.slot_id}: sourced image not among the inputs", DanglingRefWarning)
                slots.append(ImageSlot(slot.slot_id, {"state": "empty"}))
            else:
                slots.append(slot)
        slides.append(Slide(slide.title, slide.blocks, tuple(slots), slide.notes))
    return SlideDeckPlan(tuple(slides))


def plan(kind: str, inputs: list, planning_prompt: str, provider: Provider, docs, model: str = DEFAULT_MODEL):
    if kind not in _TASKS:
        raise EmptyInput(f"unknown plan kind {kind!r}")
    if not inputs:
        raise EmptyInput("planner needs at least one input")
    if not planning_prompt:
        raise EmptyInput("planner needs a non-empty planning prompt")
    context = _context_refs(inputs, docs)
    task = _TASKS[kind]
    completion = provider.complete(model, "", context, prompts.plan_prompt(task, planning_prompt))
    parsed = None
    error = ""
    for attempt in range(2):
        try:
            body = json.loads(completion)
            parsed = _PARSERS[kind](body)
            parsed.validate()
            break
        except (json.JSONDecodeError, InvalidContent, KeyError, TypeError) as exc:
            error = str(exc)
            parsed = None
            if attempt == 0:
                completion = provider.complete(
                    model, "", context, prompts.repair_prompt(task, planning_prompt, error)
                )
    if parsed is None:
        raise PlanParseError(f"provider output is not a valid {kind} plan after retry: {error}")
    if isinstance(parsed, DocumentPlan):
        parsed = _drop_dangling_citations(parsed, _allowed_citations(inputs))
    elif isinstance(parsed, SlideDeckPlan):
        parsed = _drop_dangling_images(parsed, _allowed_images(inputs, docs))
    parsed.validate()
    return parsed
