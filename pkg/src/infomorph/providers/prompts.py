"""Fixed prompt templates shipped with the engine.

The mock provider dispatches on the TASK directive; the HTTP provider sends
the assembled text as-is. Templates are part of enrichment cache keys, so
editing them invalidates cached summaries (see TEMPLATES_VERSION).
"""

from __future__ import annotations

import json

TEMPLATES_VERSION = 1

TASK_PAGE_SUMMARY = "page_summary"
TASK_DOC_SUMMARY = "document_summary"
TASK_SCOPED_CHAT = "scoped_chat"
TASK_PLAN_DOCUMENT = "plan_document"
TASK_PLAN_SLIDES = "plan_slides"
TASK_PLAN_TABLE = "plan_table"

PROMPT_OPEN = "PROMPT<<<"
PROMPT_CLOSE = ">>>"


def page_summary_prompt() -> str:
    return f"TASK: {TASK_PAGE_SUMMARY}\nLIMIT: 480\nSummarize the page in one sentence for a hover preview."


def doc_summary_prompt() -> str:
    return f"TASK: {TASK_DOC_SUMMARY}\nLIMIT: 480\nSummarize the whole document in one sentence."


def scoped_chat_prompt(question: str, history: list[dict]) -> str:
    lines = [f"TASK: {TASK_SCOPED_CHAT}"]
    for turn in history:
        lines.append(f"TURN {turn.get('role', 'user')}: {turn.get('text', '')}")
    lines.append(f"QUESTION: {question}")
    lines.append("Answer from the supplied pages only and cite pages as [pN].")
    return "\n".join(lines)


def plan_prompt(task: str, user_prompt: str) -> str:
    return (
        f"TASK: {task}\n"
        "Respond with a single JSON object matching the plan schema for this task.\n"
        f"{PROMPT_OPEN}\n{user_prompt}\n{PROMPT_CLOSE}"
    )


def repair_prompt(task: str, user_prompt: str, error: str) -> str:
    return plan_prompt(task, user_prompt) + f"\nREPAIR: previous output was not a valid plan: {error}"


def extract_task(prompt: str) -> str:
    first, _, _ = prompt.partition("\n")
    if first.startswith("TASK:"):
        return first[len("TASK:"):].strip()
    return ""


def extract_user_prompt(prompt: str) -> str:
    start = prompt.find(PROMPT_OPEN)
    if start == -1:
        return ""
    start += len(PROMPT_OPEN)
    end = prompt.find(PROMPT_CLOSE, start)
    if end == -1:
        end = len(prompt)
    return prompt[start:end].strip("\n")


def extract_directive(prompt: str, key: str) -> str:
    for line in prompt.splitlines():
        if line.startswith(f"{key}:"):
            return line[len(key) + 1:].strip()
    return ""


def page_ref(doc_id: str, index: int, text: str, title: str = "") -> str:
    """Context item for a source page; JSON so providers can parse structure."""
    return json.dumps(
        {"type": "page", "doc_id": doc_id, "index": index, "title": title, "text": text},
        sort_keys=True,
        ensure_ascii=False,
    )


def plan_ref(kind: str, body: dict) -> str:
    return json.dumps({"type": "plan", "kind": kind, "body": body}, sort_keys=True, ensure_ascii=False)


def parse_context_refs(context: list[str]) -> list[dict]:
    out = []
    for item in context:
        try:
            parsed = json.loads(item)
        except json.JSONDecodeError:
            parsed = {"type": "text", "text": item}
        if not isinstance(parsed, dict):
            parsed = {"type": "text", "text": str(parsed)}
        out.append(parsed)
    return out
