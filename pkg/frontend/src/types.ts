/** API payload types, mirroring the engine's documented JSON schemas. */

export type NodeStateName = "pending" | "dirty" | "running" | "clean" | "failed";

export type EventStateName = "running" | "clean" | "failed" | "cache-hit";

export interface WorkflowNode {
  kind: string;
  config: Record<string, unknown>;
  state: NodeStateName;
  error: string | null;
  approved: boolean;
  frozen_output: string | null;
  last_fingerprint: string | null;
}

export interface WorkflowEdge {
  id: string;
  from: string;
  to: string;
  port: number;
}

export interface WorkflowDoc {
  schema_version: number;
  metadata: { title: string; created_at: string | null; layout?: Record<string, { x: number; y: number }> };
  nodes: Record<string, WorkflowNode>;
  edges: WorkflowEdge[];
}

export interface WorkflowResponse {
  id: string;
  workflow: WorkflowDoc;
}

export interface NodeEvent {
  node: string;
  state: EventStateName;
  error?: string;
  hash?: string;
  frozen?: boolean;
  stored?: boolean;
}

export interface SseMessage {
  event: string;
  data: unknown;
}

export interface ExecutionReport {
  evaluated: string[];
  cache_hits: string[];
  provider_calls: number;
  failures: { node: string; error: string }[];
  blocked: string[];
}

export type ContentKind =
  | "document"
  | "page-set"
  | "plan:document"
  | "plan:slides"
  | "plan:table"
  | "artifact";

export interface OutputEnvelope {
  hash: string;
  kind: ContentKind;
  body: unknown;
}

export type TableCell = string | number | { amount: string; code: string };

export interface TableBody {
  columns: { name: string; type: "text" | "number" | "currency" }[];
  rows: TableCell[][];
  groups: { label: string; start: number; end: number }[];
}

export interface Block {
  type: "paragraph" | "bullet_list" | "table_ref" | "image_ref" | "citation";
  text?: string;
  items?: string[];
  ref?: string;
  hash?: string;
  doc_id?: string;
  page?: number;
}

export interface DocumentBody {
  sections: { heading: string; blocks: Block[] }[];
}

export interface SlotState {
  state: "empty" | "sourced" | "generated" | "restyled";
  hash?: string;
  prompt?: string;
  source_hash?: string;
}

export interface SlidesBody {
  slides: {
    title: string;
    blocks: Block[];
    image_slots: { slot_id: string; state: SlotState }[];
    notes?: string;
  }[];
}

export interface DocumentManifest {
  doc_id: string;
  origin: string;
  hash: string;
  media_kind: string;
  title: string;
  page_count: number;
  enriched: boolean;
  summary?: string | null;
  pages?: { index: number; summary: string | null; image_refs: string[] }[];
}

export interface PageView {
  doc_id: string;
  index: number;
  text: string;
  summary: string | null;
  image_refs: string[];
}

export interface ChatAnswer {
  answer: string;
  cited_pages: number[];
}

export type PatchOp = Record<string, unknown> & { op: string };
