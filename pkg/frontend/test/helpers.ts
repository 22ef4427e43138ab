import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { NodeEvent, SseMessage, WorkflowResponse } from "../src/types.js";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

export function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(FIXTURES, name), "utf-8")) as T;
}

export function nodeEvents(messages: SseMessage[]): NodeEvent[] {
  return messages.filter((m) => m.event === "node").map((m) => m.data as NodeEvent);
}

export function workflowFixture(name: string): WorkflowResponse {
  return fixture<WorkflowResponse>(name);
}

export interface RecordedCall {
  url: string;
  method: string;
  body: unknown;
}

/** fetch stub that records calls and replays canned responses by URL suffix. */
export function fakeFetch(routes: Record<string, { status: number; body: unknown }>) {
  const calls: RecordedCall[] = [];
  const impl = async (url: string, init?: RequestInit): Promise<Response> => {
    calls.push({ url, method: init?.method ?? "GET", body: init?.body ? JSON.parse(init.body as string) : undefined });
    const route = Object.entries(routes).find(([suffix]) => url.endsWith(suffix));
    const { status, body } = route ? route[1] : { status: 404, body: { error: { code: "unknown-id", message: "no route" } } };
    return new Response(JSON.stringify(body), { status, headers: { "content-type": "application/json" } });
  };
  return { impl, calls };
}
