/** Canvas view-model.
 *
 * The client holds no authoritative state: `fromWorkflow` derives the entire
 * canvas from one API response, and applying the execution event stream to a
 * pre-execution snapshot must land on exactly the state a hard refresh would
 * rebuild from the post-execution API response (tested against recorded
 * fixtures). Mutations never touch this state directly; they go to the API
 * and the canvas re-derives. */

import type { EventStateName, NodeEvent, WorkflowEdge, WorkflowResponse } from "./types.js";

export type Badge = "pending" | "dirty" | "running" | "clean" | "failed" | "approved";

export const BADGE_COLORS: Record<Badge, string> = {
  pending: "#9aa0a6",
  dirty: "#f0a225",
  running: "#3b82f6",
  clean: "#22a06b",
  failed: "#e5484d",
  approved: "#8250df",
};

export interface CanvasNode {
  id: string;
  kind: string;
  badge: Badge;
  approved: boolean;
  error: string | null;
  config: Record<string, unknown>;
  position: { x: number; y: number };
}

export interface Toast {
  kind: "error" | "info";
  message: string;
}

export interface CanvasState {
  workflowId: string;
  title: string;
  nodes: Record<string, CanvasNode>;
  order: string[]; // stable render order (ascending node id)
  edges: WorkflowEdge[];
  selection: string | null;
  toasts: Toast[];
  offline: boolean;
}

function autoPosition(index: number): { x: number; y: number } {
  return { x: 40 + (index % 4) * 220, y: 40 + Math.floor(index / 4) * 140 };
}

export function fromWorkflow(response: WorkflowResponse): CanvasState {
  const layout = response.workflow.metadata.layout ?? {};
  const order = Object.keys(response.workflow.nodes).sort();
  const nodes: Record<string, CanvasNode> = {};
  order.forEach((id, i) => {
    const raw = response.workflow.nodes[id]!;
    nodes[id] = {
      id,
      kind: raw.kind,
      badge: raw.approved ? "approved" : raw.state,
      approved: raw.approved,
      error: raw.error,
      config: raw.config,
      position: layout[id] ?? autoPosition(i),
    };
  });
  return {
    workflowId: response.id,
    title: response.workflow.metadata.title,
    nodes,
    order,
    edges: [...response.workflow.edges].sort((a, b) => (a.id < b.id ? -1 : 1)),
    selection: null,
    toasts: [],
    offline: false,
  };
}

const EVENT_BADGES: Record<EventStateName, Badge> = {
  running: "running",
  clean: "clean",
  failed: "failed",
  "cache-hit": "clean", // served from storage: the node is clean
};

export function applyNodeEvent(state: CanvasState, event: NodeEvent): CanvasState {
  const node = state.nodes[event.node];
  if (!node) return state;
  const badge = node.approved ? "approved" : EVENT_BADGES[event.state];
  const updated: CanvasNode = { ...node, badge, error: event.state === "failed" ? (event.error ?? "failed") : null };
  return { ...state, nodes: { ...state.nodes, [event.node]: updated } };
}

export function applyEvents(state: CanvasState, events: NodeEvent[]): CanvasState {
  return events.reduce(applyNodeEvent, state);
}

export function select(state: CanvasState, nodeId: string | null): CanvasState {
  return { ...state, selection: nodeId };
}

export function pushToast(state: CanvasState, toast: Toast): CanvasState {
  return { ...state, toasts: [...state.toasts, toast] };
}

export function setOffline(state: CanvasState, offline: boolean): CanvasState {
  return { ...state, offline };
}

/** Badge sequence a replayed event stream renders, in arrival order. */
export function badgeSequence(initial: CanvasState, events: NodeEvent[]): [string, Badge][] {
  const out: [string, Badge][] = [];
  let state = initial;
  for (const event of events) {
    state = applyNodeEvent(state, event);
    const node = state.nodes[event.node];
    if (node) out.push([event.node, node.badge]);
  }
  return out;
}

/** The comparable essence of the canvas: what a hard refresh must rebuild.
 * Ephemeral UI state (selection, toasts) is excluded by design. */
export function snapshot(state: CanvasState): unknown {
  return {
    workflowId: state.workflowId,
    title: state.title,
    order: state.order,
    nodes: state.order.map((id) => {
      const n = state.nodes[id]!;
      return { id, kind: n.kind, badge: n.badge, approved: n.approved, error: n.error, config: n.config };
    }),
    edges: state.edges,
  };
}
