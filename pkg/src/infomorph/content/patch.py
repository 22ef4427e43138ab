"""Patch application for viewer edits.

A patch is an ordered list of op dicts; later ops address the plan as already
modified by earlier ops. Application is total: any bad address or invariant
violation raises before the original plan is replaced, leaving it unchanged
(plans are immutable, so atomicity is by construction).

Op shapes are documented in docs/content-schemas.md. Addresses are 0-based.
"""

from __future__ import annotations

from typing import Any

from infomorph.content.model import (
    DocumentPlan,
    ImageSlot,
    Section,
    Slide,
    SlideDeckPlan,
    TablePlan,
)
from infomorph.errors import BadAddress, InvalidContent, InvariantViolation

OP_NAMES = ("replace_block", "insert_block", "delete_block", "move", "set_cell", "set_image_slot")


def apply_patch(plan: Any, ops: list[dict]) -> Any:
    if isinstance(plan, DocumentPlan):
        state = [[s.heading, list(s.blocks)] for s in plan.sections]
        apply_one = _apply_document_op
        rebuild = lambda st: DocumentPlan(tuple(Section(h, tuple(b)) for h, b in st))
    elif isinstance(plan, SlideDeckPlan):
        state = [
            [s.title, list(s.blocks), [[slot.slot_id, dict(slot.state)] for slot in s.image_slots], s.notes]
            for s in plan.slides
        ]
        apply_one = _apply_slides_op
        rebuild = lambda st: SlideDeckPlan(
            tuple(
                Slide(t, tuple(b), tuple(ImageSlot(sid, dict(sstate)) for sid, sstate in slots), notes)
                for t, b, slots, notes in st
            )
        )
    elif isinstance(plan, TablePlan):
        state = [list(r) for r in plan.rows]
        apply_one = lambda st, op, i: _apply_table_op(st, op, i, plan)
        rebuild = lambda st: TablePlan(plan.columns, tuple(tuple(r) for r in st), plan.groups)
    else:
        raise BadAddress(f"cannot patch content of type {type(plan).__name__}")

    for i, op in enumerate(ops):
        name = op.get("op")
        if name not in OP_NAMES:
            raise BadAddress(f"unknown op {name!r}", path=f"$[{i}].op")
        apply_one(state, op, i)

    patched = rebuild(state)
    try:
        patched.validate()
    except InvalidContent as exc:
        raise InvariantViolation(f"patch result violates plan invariants: {exc}", path=exc.path) from exc
    return patched


def _index(seq: list, value: Any, what: str, path: str, *, insert: bool = False) -> int:
    if not isinstance(value, int):
        raise BadAddress(f"{what} index must be an integer", path=path)
    limit = len(seq) if insert else len(seq) - 1
    if value < 0 or value > limit:
        raise BadAddress(f"{what} index {value} out of range [0, {limit}]", path=path)
    return value


def _move(seq: list, src: int, dst: int) -> None:
    item = seq.pop(src)
    seq.insert(dst, item)


def _apply_document_op(state: list, op: dict, i: int) -> None:
    path = f"$[{i}]"
    name = op["op"]
    if name == "move" and op.get("what") == "section":
        src = _index(state, op.get("from"), "section", f"{path}.from")
        dst = _index(state, op.get("to"), "section", f"{path}.to")
        _move(state, src, dst)
        return
    if name in ("set_cell", "set_image_slot"):
        raise BadAddress(f"{name} does not apply to a document plan", path=path)
    sec = _index(state, op.get("section"), "section", f"{path}.section")
    blocks = state[sec][1]
    if name == "replace_block":
        blk = _index(blocks, op.get("block"), "block", f"{path}.block")
        blocks[blk] = op.get("value")
    elif name == "insert_block":
        at = _index(blocks, op.get("at"), "block", f"{path}.at", insert=True)
        blocks.insert(at, op.get("value"))
    elif name == "delete_block":
        blk = _index(blocks, op.get("block"), "block", f"{path}.block")
        del blocks[blk]
    elif name == "move":
        if op.get("what") != "block":
            raise BadAddress("document move targets 'section' or 'block'", path=f"{path}.what")
        src = _index(blocks, op.get("from"), "block", f"{path}.from")
        dst = _index(blocks, op.get("to"), "block", f"{path}.to")
        _move(blocks, src, dst)


def _apply_slides_op(state: list, op: dict, i: int) -> None:
    path = f"$[{i}]"
    name = op["op"]
    if name == "move" and op.get("what") == "slide":
        src = _index(state, op.get("from"), "slide", f"{path}.from")
        dst = _index(state, op.get("to"), "slide", f"{path}.to")
        _move(state, src, dst)
        return
    if name == "set_cell":
        raise BadAddress("set_cell does not apply to a slide deck plan", path=path)
    slide = _index(state, op.get("slide"), "slide", f"{path}.slide")
    if name == "set_image_slot":
        slots = state[slide][2]
        slot_id = op.get("slot_id")
        for entry in slots:
            if entry[0] == slot_id:
                entry[1] = dict(op.get("value", {}))
                return
        raise BadAddress(f"no image slot {slot_id!r} on slide {slide}", path=f"{path}.slot_id")
    blocks = state[slide][1]
    if name == "replace_block":
        blk = _index(blocks, op.get("block"), "block", f"{path}.block")
        blocks[blk] = op.get("value")
    elif name == "insert_block":
        at = _index(blocks, op.get("at"), "block", f"{path}.at", insert=True)
        blocks.insert(at, op.get("value"))
    elif name == "delete_block":
        blk = _index(blocks, op.get("block"), "block", f"{path}.block")
        del blocks[blk]
    elif name == "move":
        if op.get("what") != "block":
            raise BadAddress("slides move targets 'slide' or 'block'", path=f"{path}.what")
        src = _index(blocks, op.get("from"), "block", f"{path}.from")
        dst = _index(blocks, op.get("to"), "block", f"{path}.to")
        _move(blocks, src, dst)


def _apply_table_op(state: list, op: dict, i: int, plan: TablePlan) -> None:
    path = f"$[{i}]"
    name = op["op"]
    if name == "set_cell":
        row = _index(state, op.get("row"), "row", f"{path}.row")
        if not isinstance(op.get("col"), int) or not 0 <= op["col"] < len(plan.columns):
            raise BadAddress(f"col index out of range [0, {len(plan.columns) - 1}]", path=f"{path}.col")
        state[row][op["col"]] = op.get("value")
    elif name == "replace_block":
        row = _index(state, op.get("row"), "row", f"{path}.row")
        state[row] = list(op.get("value", ()))
    elif name == "insert_block":
        at = _index(state, op.get("at"), "row", f"{path}.at", insert=True)
        state.insert(at, list(op.get("value", ())))
    elif name == "delete_block":
        row = _index(state, op.get("row"), "row", f"{path}.row")
        del state[row]
    elif name == "move":
        if op.get("what") != "row":
            raise BadAddress("table move targets 'row'", path=f"{path}.what")
        src = _index(state, op.get("from"), "row", f"{path}.from")
        dst = _index(state, op.get("to"), "row", f"{path}.to")
        _move(state, src, dst)
    elif name == "set_image_slot":
        raise BadAddress("set_image_slot does not apply to a table plan", path=path)
