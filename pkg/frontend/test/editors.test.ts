import { describe, expect, it } from "vitest";

import {
  cellText,
  deleteBlockGesture,
  deleteRowGesture,
  emptyFilters,
  insertBlockGesture,
  insertRowGesture,
  moveBlockGesture,
  moveRowGesture,
  moveSectionGesture,
  moveSlideGesture,
  patchPayload,
  replaceBlockGesture,
  setCellGesture,
  setFilter,
  visibleRows,
} from "../src/editors.js";
import type { OutputEnvelope, TableBody } from "../src/types.js";
import { fixture } from "./helpers.js";

const GESTURES = [
  setCellGesture(0, 1, "980"),
  replaceBlockGesture(0, 1, { type: "paragraph", text: "x" }),
  insertBlockGesture(1, 0, { type: "paragraph", text: "y" }),
  deleteBlockGesture(0, 2),
  moveSectionGesture(0, 1),
  moveBlockGesture(0, 2, 0),
  moveSlideGesture(1, 0),
  moveRowGesture(2, 0),
  deleteRowGesture(1),
  insertRowGesture(0, ["a", "b"]),
];

describe("plan edits emit exactly one patch op per gesture", () => {
  it.each(GESTURES.map((g) => [g.op, g] as const))("%s gesture", (_name, gesture) => {
    const payload = patchPayload(gesture);
    expect(payload.ops).toHaveLength(1);
    expect(payload.ops[0]).toBe(gesture);
  });

  it("a cell edit produces the documented set_cell op shape", () => {
    expect(setCellGesture(2, 1, "980")).toEqual({ op: "set_cell", row: 2, col: 1, value: "980" });
  });
});

describe("client-side table filters (view-only)", () => {
  const table = fixture<OutputEnvelope>("table_output.json").body as TableBody;

  it("filters rows by substring without emitting any ops", () => {
    const all = visibleRows(table, emptyFilters());
    expect(all).toHaveLength(table.rows.length);
    const filtered = visibleRows(table, setFilter(emptyFilters(), 0, "flight"));
    expect(filtered.length).toBeGreaterThan(0);
    expect(filtered.length).toBeLessThan(all.length);
    for (const r of filtered) {
      expect(cellText(table.rows[r]![0]!).toLowerCase()).toContain("flight");
    }
  });

  it("clearing a filter restores all rows", () => {
    const filters = setFilter(setFilter(emptyFilters(), 1, "620"), 1, "");
    expect(visibleRows(table, filters)).toHaveLength(table.rows.length);
  });

  it("currency cells filter on their rendered text", () => {
    const filtered = visibleRows(table, setFilter(emptyFilters(), 1, "620.00 USD"));
    expect(filtered).toHaveLength(1);
  });
});
