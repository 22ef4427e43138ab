"""Chat-to-workflow synthesis: deterministic template instantiation.

Output intents are detected from the goal via a documented keyword map
(docs/workflow-schema.md); each intent becomes a branch
sources -> extractor (+ page preview) -> planner -> viewer, with every
effective-relevant source wired into every branch. Extraction and planning
prompts are pre-populated from the goal and conversation preferences, so one
(goal, triage, docs) triple always synthesizes byte-identical workflows.
"""

from __future__ import annotations

from infomorph.content.canonical import canonicalize, sha256_hex
from infomorph.content.model import Document
from infomorph.errors import NoRelevantSources
from infomorph.graph.engine import connect
from infomorph.graph.kinds import NodeKind
from infomorph.graph.model import WorkflowGraph
from infomorph.ops.triage import SourceTriage
from infomorph.providers.base import DEFAULT_TAU
from infomorph.providers.tokens import tokens

INTENT_KEYWORDS: dict[str, tuple[str, ...]] = {
    "table": ("budget", "cost", "costs", "estimate", "estimates", "expense", "expenses", "spreadsheet", "table", "pricing"),
    "document": ("itinerary", "report", "document", "plan", "notes", "writeup", "summary", "ideas"),
    "slides": ("slides", "deck", "presentation", "talk", "slideshow"),
}

INTENT_ORDER = ("table", "document", "slides")

PLANNER_FOR_INTENT = {
    "table": NodeKind.SPREADSHEET_PLANNER,
    "document": NodeKind.DOCUMENT_PLANNER,
    "slides": NodeKind.SLIDE_DECK_PLANNER,
}

VIEWER_FOR_INTENT = {
    "table": NodeKind.SPREADSHEET_VIEWER,
    "document": NodeKind.DOCUMENT_EDITOR,
    "slides": NodeKind.SLIDE_DECK_VIEWER,
}

EXTRACTION_TEMPLATES = {
    "table": "Extract flights, accommodation, fees, and known expenses with costs.",
    "slides": "Extract key themes, talks, sessions, demos, and takeaways.",
}

PLANNING_TEMPLATES = {
    "table": (
        "Create a simple budget table for: {goal}. Limit it to three columns: "
        "Item, Estimated Cost (USD), and Notes. Group entries under categories "
        "like Flights, Hotel, Food, and Activities if relevant."
    ),
    "document": "Create a structured document for: {goal}. Organize it into sections with clear headings.",
    "slides": "Create a slide deck summarizing: {goal}. Organize slides by theme with clear, relevant titles.",
}


def detect_intents(goal: str) -> list[str]:
    goal_tokens = set(tokens(goal))
    detected = [intent for intent in INTENT_ORDER if goal_tokens & set(INTENT_KEYWORDS[intent])]
    return detected or ["document"]


def extraction_prompt_for(intent: str, preferences: str) -> str:
    template = EXTRACTION_TEMPLATES.get(intent)
    if template is None:  # document branch extracts by the stated preferences
        return preferences or "Extract the most relevant pages."
    return template


def synthesize_workflow(goal: str, triage: SourceTriage, docs: list[Document]) -> WorkflowGraph:
    relevant = sorted(
        (d for d in docs if triage.effective(d.doc_id) == "relevant"), key=lambda d: d.doc_id
    )
    if not relevant:
        raise NoRelevantSources("no effective-relevant sources to build a workflow from")

    graph = WorkflowGraph(title=goal[:120])
    for doc in relevant:
        kind = NodeKind.URL_SOURCE if doc.origin.startswith(("http://", "https://")) else NodeKind.FILE_SOURCE
        graph.add_node(
            kind,
            config={
                "doc_id": doc.doc_id,
                "origin": doc.origin,
                "content_hash": sha256_hex(canonicalize(doc)),
            },
            node_id=f"src-{doc.doc_id}",
        )

    for intent in detect_intents(goal):
        extractor = graph.add_node(
            NodeKind.RELEVANT_PAGE_EXTRACTOR,
            config={
                "extraction_prompt": extraction_prompt_for(intent, triage.preferences),
                "mode": "two_stage",
                "k": 8,
                "retrieval_mode": "text",
                "tau": DEFAULT_TAU,
            },
            node_id=f"extract-{intent}",
        )
        for port, doc in enumerate(relevant):
            connect(graph, f"src-{doc.doc_id}", extractor.id, port)
        preview = graph.add_node(NodeKind.PAGE_PREVIEW, node_id=f"preview-{intent}")
        connect(graph, extractor.id, preview.id, 0)
        planner = graph.add_node(
            PLANNER_FOR_INTENT[intent],
            config={"planning_prompt": PLANNING_TEMPLATES[intent].format(goal=goal)},
            node_id=f"plan-{intent}",
        )
        connect(graph, extractor.id, planner.id, 0)
        viewer = graph.add_node(VIEWER_FOR_INTENT[intent], node_id=f"view-{intent}")
        connect(graph, planner.id, viewer.id, 0)

    graph.validate()
    return graph
