/** Realize a VNode tree in the browser. Rendering is replace-on-update: the
 * canvas is small and the authoritative state lives server-side, so there is
 * nothing to reconcile. */

import type { VNode } from "./canvas.js";

const SVG_TAGS = new Set(["svg", "line", "path", "circle", "g"]);

export function realize(node: VNode): Element {
  const element = SVG_TAGS.has(node.tag)
    ? document.createElementNS("http://www.w3.org/2000/svg", node.tag)
    : document.createElement(node.tag);
  for (const [key, value] of Object.entries(node.attrs)) {
    element.setAttribute(key, value);
  }
  for (const [event, handler] of Object.entries(node.on ?? {})) {
    if (event === "commit") {
      // cell/block editing: commit the text content on blur
      element.setAttribute("contenteditable", "true");
      element.addEventListener("blur", () => (handler as (v: string) => void)(element.textContent ?? ""));
    } else if (event === "input" || event === "change") {
      element.addEventListener(event, (e) => (handler as (v: string) => void)((e.target as HTMLInputElement).value));
    } else if (event === "click" && (node.attrs.class ?? "").includes("generate")) {
      element.addEventListener("click", () => {
        const prompt = window.prompt("Image prompt") ?? "";
        if (prompt) (handler as (v: string) => void)(prompt);
      });
    } else if (event === "click" && (node.attrs.class ?? "").includes("restyle")) {
      element.addEventListener("click", () => {
        const prompt = window.prompt("Restyle prompt") ?? "";
        if (prompt) (handler as (v: string) => void)(prompt);
      });
    } else {
      element.addEventListener(event, () => (handler as () => void)());
    }
  }
  for (const child of node.children) {
    element.append(typeof child === "string" ? document.createTextNode(child) : realize(child));
  }
  return element;
}

export function mount(container: Element, node: VNode): void {
  container.replaceChildren(realize(node));
}
