/** Thin API client: every user mutation maps to exactly one request, and the
 * engine's machine-readable error codes surface as ApiError for inline
 * display. No engine logic is re-implemented client-side. */

import type {
  ChatAnswer,
  DocumentManifest,
  ExecutionReport,
  OutputEnvelope,
  PageView,
  PatchOp,
  WorkflowResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public path?: string,
  ) {
    super(message);
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private base: string = "",
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchImpl(this.base + path, init);
    if (response.status === 204) return undefined as T;
    const payload = await response.json().catch(() => null);
    if (!response.ok) {
      const err = (payload as { error?: { code?: string; message?: string; path?: string } } | null)?.error;
      throw new ApiError(response.status, err?.code ?? "unknown", err?.message ?? response.statusText, err?.path);
    }
    return payload as T;
  }

  getWorkflow(id: string): Promise<WorkflowResponse> {
    return this.request("GET", `/workflows/${id}`);
  }

  addNode(workflowId: string, kind: string, config: Record<string, unknown>): Promise<{ node: { id: string } }> {
    return this.request("POST", `/workflows/${workflowId}/nodes`, { kind, config });
  }

  setNodeConfig(nodeId: string, config: Record<string, unknown>): Promise<unknown> {
    return this.request("PUT", `/nodes/${nodeId}/config`, { config });
  }

  addEdge(workflowId: string, from: string, to: string, port: number): Promise<{ edge_id: string }> {
    return this.request("POST", "/edges", { workflow_id: workflowId, from, to, port });
  }

  deleteEdge(edgeId: string): Promise<void> {
    return this.request("DELETE", `/edges/${edgeId}`);
  }

  execute(workflowId: string): Promise<{ execution_id: string; report: ExecutionReport | null }> {
    return this.request("POST", `/workflows/${workflowId}/execute?wait=false`, {});
  }

  approve(nodeId: string, approved: boolean): Promise<unknown> {
    return this.request("POST", `/nodes/${nodeId}/approve`, { approved });
  }

  patchNode(nodeId: string, ops: PatchOp[]): Promise<{ preview: { kind: string; body: unknown } }> {
    return this.request("POST", `/nodes/${nodeId}/patch`, { ops });
  }

  imageOp(nodeId: string, op: "generate" | "restyle", slide: number, slotId: string, prompt: string): Promise<{ hash: string }> {
    return this.request("POST", `/nodes/${nodeId}/image-op`, { op, slide, slot_id: slotId, prompt });
  }

  getOutput(nodeId: string): Promise<OutputEnvelope> {
    return this.request("GET", `/nodes/${nodeId}/output`);
  }

  getDocument(docId: string): Promise<DocumentManifest> {
    return this.request("GET", `/documents/${docId}`);
  }

  getPage(docId: string, index: number): Promise<PageView> {
    return this.request("GET", `/documents/${docId}/pages/${index}`);
  }

  chat(docId: string, question: string, history: { role: string; text: string }[]): Promise<ChatAnswer> {
    return this.request("POST", `/documents/${docId}/chat`, { question, history });
  }

  eventsUrl(executionId: string): string {
    return `${this.base}/executions/${executionId}/events`;
  }

  artifactUrl(hash: string): string {
    return `${this.base}/artifacts/${hash}`;
  }
}
