/** Browser bootstrap: load the workflow, render, follow execution events.
 *
 * A hard refresh rebuilds the exact canvas from the API (stateless client);
 * structural edits are pessimistic (the server validates cycles and kinds),
 * plan edits are optimistic with revert-on-rejection handled by re-fetching.
 */

import { ApiClient, ApiError } from "./api.js";
import { renderCanvas, type CanvasHandlers } from "./canvas.js";
import { mount } from "./dom.js";
import { connectEvents } from "./sse.js";
import {
  applyNodeEvent,
  fromWorkflow,
  pushToast,
  select,
  setOffline,
  type CanvasState,
} from "./state.js";
import type { NodeEvent } from "./types.js";

export class CanvasApp {
  private state!: CanvasState;

  constructor(
    private api: ApiClient,
    private container: Element,
    private workflowId: string,
  ) {}

  async start(): Promise<void> {
    await this.refresh();
  }

  async refresh(): Promise<void> {
    try {
      this.state = fromWorkflow(await this.api.getWorkflow(this.workflowId));
    } catch {
      this.state = setOffline(this.state ?? fromWorkflow({ id: this.workflowId, workflow: { schema_version: 1, metadata: { title: "", created_at: null }, nodes: {}, edges: [] } }), true);
    }
    this.render();
  }

  private render(): void {
    const handlers: CanvasHandlers = {
      selectNode: (nodeId) => {
        this.state = select(this.state, nodeId);
        this.render();
      },
      approve: (nodeId, approved) => void this.mutate(() => this.api.approve(nodeId, approved)),
      configEdit: (nodeId, key, value) => {
        const node = this.state.nodes[nodeId];
        if (!node) return;
        void this.mutate(() => this.api.setNodeConfig(nodeId, { ...node.config, [key]: value }));
      },
    };
    mount(this.container, renderCanvas(this.state, handlers));
  }

  /** One gesture, one API call; errors surface inline, then re-sync. */
  private async mutate(call: () => Promise<unknown>): Promise<void> {
    try {
      await call();
    } catch (error) {
      const message = error instanceof ApiError ? `${error.code}: ${error.message}` : String(error);
      this.state = pushToast(this.state, { kind: "error", message });
    }
    await this.refresh();
  }

  async execute(): Promise<void> {
    const { execution_id } = await this.api.execute(this.workflowId);
    await connectEvents(this.api.eventsUrl(execution_id), (message) => {
      if (message.event === "node") {
        this.state = applyNodeEvent(this.state, message.data as NodeEvent);
        this.render();
      }
    });
    await this.refresh();
  }
}

declare global {
  interface Window {
    canvasApp?: CanvasApp;
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  const params = new URLSearchParams(window.location.search);
  const workflowId = params.get("workflow") ?? "";
  const app = new CanvasApp(new ApiClient(""), document.getElementById("app")!, workflowId);
  window.canvasApp = app;
  void app.start();
}
