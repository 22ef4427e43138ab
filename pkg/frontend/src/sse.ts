/** Incremental server-sent-events parser.
 *
 * The core is chunk-boundary safe and framework free so tests can feed it
 * arbitrary splits of a recorded stream; `connectEvents` adapts it to a
 * streaming fetch in the browser. */

import type { SseMessage } from "./types.js";

export class SseParser {
  private buffer = "";
  private eventName = "message";
  private dataLines: string[] = [];

  constructor(private onMessage: (message: SseMessage) => void) {}

  feed(chunk: string): void {
    this.buffer += chunk;
    let index: number;
    while ((index = this.buffer.indexOf("\n")) >= 0) {
      const line = this.buffer.slice(0, index).replace(/\r$/, "");
      this.buffer = this.buffer.slice(index + 1);
      this.line(line);
    }
  }

  private line(line: string): void {
    if (line === "") {
      if (this.dataLines.length > 0) {
        let data: unknown = this.dataLines.join("\n");
        try {
          data = JSON.parse(data as string);
        } catch {
          // non-JSON data events pass through as text
        }
        this.onMessage({ event: this.eventName, data });
      }
      this.eventName = "message";
      this.dataLines = [];
      return;
    }
    if (line.startsWith(":")) return; // comment / keep-alive
    if (line.startsWith("event:")) {
      this.eventName = line.slice("event:".length).trim();
    } else if (line.startsWith("data:")) {
      this.dataLines.push(line.slice("data:".length).replace(/^ /, ""));
    }
  }

  /** Flush a final message that was not newline-terminated. */
  close(): void {
    if (this.buffer) {
      this.feed("\n");
    }
    this.line("");
  }
}

export async function connectEvents(
  url: string,
  onMessage: (message: SseMessage) => void,
  fetchImpl: (url: string) => Promise<Response> = (u) => fetch(u),
): Promise<void> {
  const response = await fetchImpl(url);
  if (!response.ok || !response.body) {
    throw new Error(`event stream failed: ${response.status}`);
  }
  const parser = new SseParser(onMessage);
  const reader = response.body.getReader();
  const decoder = new TextDecoder();
  for (;;) {
    const { done, value } = await reader.read();
    if (done) break;
    parser.feed(decoder.decode(value, { stream: true }));
  }
  parser.close();
}
