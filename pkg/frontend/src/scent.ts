/** Information-scent affordances for document nodes: hover page summaries,
 * the whole-document summary toggle, and the scoped chat drawer with
 * citations linkified to their pages. */

import type { ChatAnswer, DocumentManifest } from "./types.js";

export interface PageMarker {
  index: number;
  tooltip: string;
}

export function pageMarkers(doc: DocumentManifest): PageMarker[] {
  return (doc.pages ?? []).map((page) => ({
    index: page.index,
    tooltip: page.summary ?? "summary pending",
  }));
}

export function docSummary(doc: DocumentManifest): string {
  return doc.summary ?? "summary pending";
}

export function chatEnabled(doc: DocumentManifest): boolean {
  return doc.page_count > 0;
}

export type AnswerSegment = { text: string } | { page: number };

/** Split an answer into text and clickable [pN] citation segments. */
export function linkifyCitations(answer: ChatAnswer): AnswerSegment[] {
  const segments: AnswerSegment[] = [];
  const pattern = /\[p(\d+)\]/g;
  let cursor = 0;
  let match: RegExpExecArray | null;
  while ((match = pattern.exec(answer.answer)) !== null) {
    if (match.index > cursor) segments.push({ text: answer.answer.slice(cursor, match.index) });
    segments.push({ page: Number(match[1]) });
    cursor = match.index + match[0].length;
  }
  if (cursor < answer.answer.length) segments.push({ text: answer.answer.slice(cursor) });
  return segments;
}
