/** Pure rendering: state in, a lightweight virtual-node tree out.
 *
 * Keeping render as data (no DOM types) lets the tests assert on structure
 * directly; dom.ts realizes the tree in the browser. */

import { BADGE_COLORS, type CanvasState } from "./state.js";
import { cellText, setCellGesture, visibleRows, type TableFilters } from "./editors.js";
import type { DocumentBody, PatchOp, SlidesBody, TableBody, TableCell } from "./types.js";

export type Handler = (...args: never[]) => void;

export interface VNode {
  tag: string;
  attrs: Record<string, string>;
  on?: Record<string, Handler>;
  children: (VNode | string)[];
}

export function h(tag: string, attrs: Record<string, string> = {}, children: (VNode | string)[] = [], on?: Record<string, Handler>): VNode {
  return on ? { tag, attrs, children, on } : { tag, attrs, children };
}

export function findAll(root: VNode, predicate: (node: VNode) => boolean): VNode[] {
  const out: VNode[] = [];
  const walk = (node: VNode) => {
    if (predicate(node)) out.push(node);
    for (const child of node.children) {
      if (typeof child !== "string") walk(child);
    }
  };
  walk(root);
  return out;
}

export function textOf(node: VNode): string {
  return node.children.map((c) => (typeof c === "string" ? c : textOf(c))).join("");
}

// -- canvas ------------------------------------------------------------------

export interface CanvasHandlers {
  selectNode: (nodeId: string) => void;
  approve: (nodeId: string, approved: boolean) => void;
  configEdit: (nodeId: string, key: string, value: string) => void;
}

export function renderCanvas(state: CanvasState, handlers: CanvasHandlers): VNode {
  const nodes = state.order.map((id) => {
    const node = state.nodes[id]!;
    const classes = ["node", `badge-${node.badge}`, state.selection === id ? "selected" : ""]
      .filter(Boolean)
      .join(" ");
    const children: (VNode | string)[] = [
      h("span", { class: "node-kind" }, [node.kind]),
      h("span", { class: "node-badge", style: `background:${BADGE_COLORS[node.badge]}` }, [node.badge]),
    ];
    if (node.approved) children.push(h("span", { class: "lock-glyph", title: "approved (frozen)" }, ["🔒"]));
    if (node.error) children.push(h("span", { class: "node-error", title: node.error }, ["!"]));
    return h(
      "div",
      {
        class: classes,
        "data-node": id,
        style: `left:${node.position.x}px;top:${node.position.y}px`,
      },
      children,
      { click: (() => handlers.selectNode(id)) as Handler },
    );
  });

  const edgeLines = state.edges.map((edge) => {
    const from = state.nodes[edge.from]?.position ?? { x: 0, y: 0 };
    const to = state.nodes[edge.to]?.position ?? { x: 0, y: 0 };
    return h("line", {
      "data-edge": edge.id,
      x1: String(from.x + 180),
      y1: String(from.y + 40),
      x2: String(to.x),
      y2: String(to.y + 40),
    });
  });

  const children: (VNode | string)[] = [
    h("svg", { class: "edges" }, edgeLines),
    ...nodes,
  ];
  if (state.selection && state.nodes[state.selection]) {
    children.push(renderConfigPanel(state, state.selection, handlers));
  }
  children.push(renderToasts(state));
  if (state.offline) children.push(h("div", { class: "offline-banner" }, ["service unreachable"]));
  return h("div", { class: "canvas", "data-workflow": state.workflowId }, children);
}

function renderConfigPanel(state: CanvasState, nodeId: string, handlers: CanvasHandlers): VNode {
  const node = state.nodes[nodeId]!;
  const rows = Object.entries(node.config)
    .filter(([key]) => key !== "patch")
    .map(([key, value]) =>
      h("label", { class: "config-row" }, [
        key,
        h(
          "input",
          {
            name: key,
            value: typeof value === "string" ? value : JSON.stringify(value),
            ...(node.approved ? { disabled: "disabled" } : {}),
          },
          [],
          node.approved ? undefined : { change: ((v: string) => handlers.configEdit(nodeId, key, v)) as Handler },
        ),
      ]),
    );
  const approveLabel = node.approved ? "Unapprove" : "Approve";
  return h("div", { class: "config-panel", "data-node": nodeId }, [
    h("h3", {}, [node.kind]),
    ...rows,
    h("button", { class: "approve-button" }, [approveLabel], {
      click: (() => handlers.approve(nodeId, !node.approved)) as Handler,
    }),
  ]);
}

function renderToasts(state: CanvasState): VNode {
  return h(
    "div",
    { class: "toasts" },
    state.toasts.map((toast) => h("div", { class: `toast toast-${toast.kind}` }, [toast.message])),
  );
}

// -- viewer panels ------------------------------------------------------------

export interface ViewerHandlers {
  gesture: (op: PatchOp) => void; // exactly one op per call
  imageOp: (op: "generate" | "restyle", slide: number, slotId: string, prompt: string) => void;
  setFilter: (col: number, text: string) => void;
}

export function renderTable(body: TableBody, filters: TableFilters, approved: boolean, handlers: ViewerHandlers): VNode {
  const header = h(
    "tr",
    {},
    body.columns.map((col, i) =>
      h("th", {}, [
        col.name,
        h("input", { class: "filter", placeholder: "filter", value: filters.byColumn[i] ?? "" }, [], {
          input: ((text: string) => handlers.setFilter(i, text)) as Handler,
        }),
      ]),
    ),
  );
  const rows = visibleRows(body, filters).map((r) =>
    h(
      "tr",
      { "data-row": String(r) },
      body.rows[r]!.map((cell, c) =>
        h(
          "td",
          { "data-col": String(c), ...(approved ? { class: "locked" } : {}) },
          [cellText(cell)],
          approved
            ? undefined
            : {
                commit: ((value: TableCell) => handlers.gesture(setCellGesture(r, c, value))) as Handler,
              },
        ),
      ),
    ),
  );
  return h("table", { class: "table-grid" }, [header, ...rows]);
}

export function renderOutline(body: DocumentBody, approved: boolean, handlers: ViewerHandlers): VNode {
  const sections = body.sections.map((section, s) =>
    h("section", { "data-section": String(s) }, [
      h("h2", {}, [section.heading]),
      ...section.blocks.map((block, b) =>
        h(
          "div",
          { class: `block block-${block.type}`, "data-block": String(b) },
          [blockText(block)],
          approved
            ? undefined
            : {
                commit: ((value: unknown) =>
                  handlers.gesture({ op: "replace_block", section: s, block: b, value })) as Handler,
              },
        ),
      ),
    ]),
  );
  return h("div", { class: "outline" }, sections);
}

function blockText(block: DocumentBody["sections"][number]["blocks"][number]): string {
  switch (block.type) {
    case "paragraph":
      return block.text ?? "";
    case "bullet_list":
      return (block.items ?? []).map((item) => `• ${item}`).join("\n");
    case "citation":
      return `source: ${block.doc_id} p.${block.page}`;
    case "image_ref":
      return `[image ${block.hash?.slice(0, 8)}]`;
    case "table_ref":
      return `[table ${block.ref}]`;
  }
}

export function renderSlides(body: SlidesBody, approved: boolean, handlers: ViewerHandlers, artifactUrl: (hash: string) => string): VNode {
  const slides = body.slides.map((slide, s) =>
    h("article", { class: "slide", "data-slide": String(s) }, [
      h("h2", {}, [slide.title]),
      ...slide.blocks.map((block) => h("div", { class: `block block-${block.type}` }, [blockText(block)])),
      ...slide.image_slots.map((slot) => {
        const children: (VNode | string)[] = [];
        if (slot.state.hash) {
          children.push(h("img", { src: artifactUrl(slot.state.hash), alt: slot.slot_id }));
        } else {
          children.push(h("div", { class: "slot-empty" }, ["no image"]));
        }
        if (!approved) {
          children.push(
            h("button", { class: "generate" }, ["Generate Image"], {
              click: ((prompt: string) => handlers.imageOp("generate", s, slot.slot_id, prompt)) as Handler,
            }),
          );
          if (slot.state.hash) {
            children.push(
              h("button", { class: "restyle" }, ["Restyle Image"], {
                click: ((prompt: string) => handlers.imageOp("restyle", s, slot.slot_id, prompt)) as Handler,
              }),
            );
          }
        }
        return h("figure", { class: "image-slot", "data-slot": slot.slot_id }, children);
      }),
      ...(slide.notes ? [h("aside", { class: "notes" }, [slide.notes])] : []),
    ]),
  );
  return h("div", { class: "deck" }, slides);
}
