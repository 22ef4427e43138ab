"""Conversation-driven source triage.

Each document is judged against a prompt synthesized from the conversation
(all user turns joined); the judged text is the document title plus all page
texts. The triage also keeps the user's stated preferences (the final user
turn) for pre-populating extraction prompts downstream. A user override
always wins over the model label. An empty conversation states no
constraints: everything is relevant.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from infomorph.content.model import Document, Page
from infomorph.errors import EmptyInput
from infomorph.providers.base import DEFAULT_MODEL, DEFAULT_TAU, Provider

LABELS = ("relevant", "irrelevant")


@dataclass
class TriageEntry:
    label: str
    rationale: str
    user_override: str | None = None

    @property
    def effective(self) -> str:
        return self.user_override if self.user_override is not None else self.label

    def to_jsonable(self) -> dict:
        return {"label": self.label, "rationale": self.rationale, "user_override": self.user_override}


@dataclass
class SourceTriage:
    entries: dict[str, TriageEntry] = field(default_factory=dict)
    preferences: str = ""

    def effective(self, doc_id: str) -> str:
        entry = self.entries.get(doc_id)
        return entry.effective if entry else "irrelevant"

    def set_override(self, doc_id: str, label: str | None) -> None:
        if label is not None and label not in LABELS:
            raise EmptyInput(f"override label must be one of {LABELS}")
        if doc_id not in self.entries:
            raise EmptyInput(f"no triage entry for {doc_id!r}")
        self.entries[doc_id].user_override = label

    def to_jsonable(self) -> dict:
        return {
            "preferences": self.preferences,
            "sources": {doc_id: e.to_jsonable() for doc_id, e in sorted(self.entries.items())},
        }

    @classmethod
    def from_jsonable(cls, data: dict) -> "SourceTriage":
        triage = cls(preferences=data.get("preferences", ""))
        for doc_id, raw in data.get("sources", {}).items():
            triage.entries[doc_id] = TriageEntry(
                label=raw.get("label", "relevant"),
                rationale=raw.get("rationale", ""),
                user_override=raw.get("user_override"),
            )
        return triage


def parse_conversation(raw: str | list) -> list[dict]:
    """Accept either turn dicts or a transcript of ``role: text`` lines."""
    if isinstance(raw, list):
        return [{"role": t.get("role", "user"), "text": t.get("text", "")} for t in raw]
    turns = []
    for line in raw.splitlines():
        line = line.strip()
        if not line:
            continue
        role, sep, text = line.partition(":")
        if sep and role.strip().lower() in ("user", "assistant", "system"):
            turns.append({"role": role.strip().lower(), "text": text.strip()})
        else:
            turns.append({"role": "user", "text": line})
    return turns


def triage_sources(
    conversation: str | list,
    docs: list[Document],
    provider: Provider,
    model: str = DEFAULT_MODEL,
    tau: float = DEFAULT_TAU,
) -> SourceTriage:
    if not docs:
        raise EmptyInput("triage needs at least one document")
    if not any(p.summary is not None or p.embedding is not None for d in docs for p in d.pages):
        raise EmptyInput("triage needs at least one enriched document")
    turns = parse_conversation(conversation)
    user_turns = [t["text"] for t in turns if t["role"] == "user" and t["text"].strip()]
    judge_prompt = " ".join(user_turns).strip()
    triage = SourceTriage(preferences=user_turns[-1] if user_turns else "")
    if not judge_prompt:
        for doc in sorted(docs, key=lambda d: d.doc_id):
            triage.entries[doc.doc_id] = TriageEntry(label="relevant", rationale="no constraints stated")
        return triage
    for doc in sorted(docs, key=lambda d: d.doc_id):
        combined = "\n".join([doc.title] + [p.text for p in doc.pages])
        judgment = provider.judge(model, Page(index=1, text=combined), judge_prompt, tau)
        triage.entries[doc.doc_id] = TriageEntry(label=judgment.verdict, rationale=judgment.rationale)
    return triage
