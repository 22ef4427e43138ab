/** Plan editors: each user gesture maps to exactly one patch operation.
 *
 * The functions here build the single op for a gesture; the caller sends it
 * as one POST /nodes/{id}/patch. Table filters are view-layer state only and
 * never become patch ops. */

import type { PatchOp, TableBody, TableCell } from "./types.js";

export function setCellGesture(row: number, col: number, value: TableCell): PatchOp {
  return { op: "set_cell", row, col, value };
}

export function replaceBlockGesture(section: number, block: number, value: unknown): PatchOp {
  return { op: "replace_block", section, block, value };
}

export function insertBlockGesture(section: number, at: number, value: unknown): PatchOp {
  return { op: "insert_block", section, at, value };
}

export function deleteBlockGesture(section: number, block: number): PatchOp {
  return { op: "delete_block", section, block };
}

export function moveSectionGesture(from: number, to: number): PatchOp {
  return { op: "move", what: "section", from, to };
}

export function moveBlockGesture(section: number, from: number, to: number): PatchOp {
  return { op: "move", what: "block", section, from, to };
}

export function moveSlideGesture(from: number, to: number): PatchOp {
  return { op: "move", what: "slide", from, to };
}

export function moveRowGesture(from: number, to: number): PatchOp {
  return { op: "move", what: "row", from, to };
}

export function deleteRowGesture(row: number): PatchOp {
  return { op: "delete_block", row };
}

export function insertRowGesture(at: number, value: TableCell[]): PatchOp {
  return { op: "insert_block", at, value };
}

/** One gesture, one op, one API payload. */
export function patchPayload(op: PatchOp): { ops: PatchOp[] } {
  return { ops: [op] };
}

// -- client-side table filters (view-only, never persisted) -----------------

export interface TableFilters {
  byColumn: Record<number, string>;
}

export function emptyFilters(): TableFilters {
  return { byColumn: {} };
}

export function setFilter(filters: TableFilters, col: number, text: string): TableFilters {
  const byColumn = { ...filters.byColumn };
  if (text === "") {
    delete byColumn[col];
  } else {
    byColumn[col] = text;
  }
  return { byColumn };
}

export function cellText(cell: TableCell): string {
  if (typeof cell === "object" && cell !== null) return `${cell.amount} ${cell.code}`;
  return String(cell);
}

/** Row indices passing every active column filter (case-insensitive substring). */
export function visibleRows(body: TableBody, filters: TableFilters): number[] {
  const active = Object.entries(filters.byColumn);
  return body.rows
    .map((_, i) => i)
    .filter((i) =>
      active.every(([col, needle]) => {
        const cell = body.rows[i]?.[Number(col)];
        return cell !== undefined && cellText(cell).toLowerCase().includes(needle.toLowerCase());
      }),
    );
}
