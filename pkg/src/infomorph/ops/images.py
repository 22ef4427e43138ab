"""Slot-level image operations on slide deck plans.

The provider call happens here, once; the resulting slot state carries the
returned hash plus provenance (prompt, source), so re-evaluating the plan
replays the recorded state without another provider call.
"""

from __future__ import annotations

from infomorph.content.model import ImageSlot, Slide, SlideDeckPlan
from infomorph.errors import BadAddress
from infomorph.providers.base import DEFAULT_MODEL, Provider


def image_op(
    op: str,
    address: dict,
    prompt: str,
    plan: SlideDeckPlan,
    provider: Provider,
    model: str = DEFAULT_MODEL,
) -> SlideDeckPlan:
    if op not in ("generate", "restyle"):
        raise BadAddress(f"unknown image op {op!r}")
    slide_index = address.get("slide")
    slot_id = address.get("slot_id")
    if not isinstance(slide_index, int) or not 0 <= slide_index < len(plan.slides):
        raise BadAddress(f"slide index {slide_index!r} out of range")
    slide = plan.slides[slide_index]
    slot = next((s for s in slide.image_slots if s.slot_id == slot_id), None)
    if slot is None:
        raise BadAddress(f"no image slot {slot_id!r} on slide {slide_index}")

    if op == "generate":
        digest = provider.generate_image(model, prompt)
        new_state = {"state": "generated", "hash": digest, "prompt": prompt}
    else:
        source = slot.current_hash()
        if source is None:
            raise BadAddress(f"slot {slot_id!r} is empty; restyle needs a source image")
        digest = provider.restyle_image(model, source, prompt)
        new_state = {"state": "restyled", "hash": digest, "source_hash": source, "prompt": prompt}

    new_slots = tuple(
        ImageSlot(s.slot_id, new_state if s.slot_id == slot_id else dict(s.state)) for s in slide.image_slots
    )
    new_slide = Slide(slide.title, slide.blocks, new_slots, slide.notes)
    slides = tuple(new_slide if i == slide_index else s for i, s in enumerate(plan.slides))
    out = SlideDeckPlan(slides)
    out.validate()
    return out


def slot_patch_op(address: dict, state: dict) -> dict:
    """The set_image_slot patch op equivalent of an applied image operation."""
    return {
        "op": "set_image_slot",
        "slide": address["slide"],
        "slot_id": address["slot_id"],
        "value": state,
    }
