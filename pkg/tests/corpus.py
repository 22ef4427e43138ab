"""Randomized workflow corpus for the acceptance suite.

Generates valid graphs (<= 12 nodes) over a small pool of enriched text
documents, plus random edit sequences. Every helper here is independent of
the engine's own planning code: the dirty-closure oracle works from the raw
edge list, exactly as the acceptance criteria demand.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass, field

from infomorph.content.canonical import canonicalize, sha256_hex
from infomorph.content.model import Document, Page
from infomorph.graph import engine
from infomorph.graph.kinds import NodeKind
from infomorph.graph.model import NodeState, WorkflowGraph
from infomorph.ingest.ingestion import Ingestor
from infomorph.ops.registry import build_registry
from infomorph.providers.base import ProviderRegistry
from infomorph.providers.mock import MockProvider
from infomorph.store.blobs import BlobStore
from infomorph.store.cache import Cache
from infomorph.store.docs import DocumentStore

DOC_POOL_SPECS = [
    ("pool-a", "Harbor notes", [
        "Seafood dining at the harbor market. Fresh seafood stalls for families.",
        "Ferry costs $12 and the aquarium fee is $25. Known expenses listed.",
        "Historical sites of the old town with family activities.",
    ]),
    ("pool-b", "City ledger", [
        "Hotel accommodation costs $130 per night. Booking fees included.",
        "Flight tickets cost $620 round trip. Baggage fees add $40.",
        "Family activities calendar for early October weekends.",
    ]),
    ("pool-c", "Festival flyer", [
        "Historical sites tour with seafood dining afterwards.",
        "Evening harbor activities for families. Street food dining.",
    ]),
]

PROMPT_POOL = [
    "Extract known expenses with costs and fees.",
    "historical sites seafood dining family activities",
    "harbor ferry family evenings",
]

PLAN_PROMPT_POOL = [
    "Create a budget. Limit it to three columns: Item, Estimated Cost (USD), and Notes.",
    "Organize the findings into sections with clear headings.",
    "Summarize the highlights for a short deck.",
]

PLANNER_KINDS = {
    "table": (NodeKind.SPREADSHEET_PLANNER, NodeKind.SPREADSHEET_VIEWER, NodeKind.SPREADSHEET_BUILDER),
    "document": (NodeKind.DOCUMENT_PLANNER, NodeKind.DOCUMENT_EDITOR, NodeKind.DOCUMENT_BUILDER),
    "slides": (NodeKind.SLIDE_DECK_PLANNER, NodeKind.SLIDE_DECK_VIEWER, NodeKind.SLIDE_DECK_BUILDER),
}


def build_doc_pool(blobs: BlobStore, cache: Cache, docs: DocumentStore) -> list[Document]:
    provider = MockProvider(blobs)
    ing = Ingestor(blobs, cache)
    pool = []
    for doc_id, title, texts in DOC_POOL_SPECS:
        doc = Document(
            doc_id=doc_id,
            origin=f"pool/{doc_id}.txt",
            media_kind="text",
            title=title,
            pages=tuple(Page(index=i + 1, text=t) for i, t in enumerate(texts)),
        )
        doc = ing.enrich(doc, provider)
        docs.save(doc)
        pool.append(doc)
    return pool


@dataclass
class Workbench:
    """One random graph plus everything needed to execute it."""

    graph: WorkflowGraph
    blobs: BlobStore
    cache: Cache
    docs: DocumentStore
    providers: ProviderRegistry
    registry: object = field(init=False)

    def __post_init__(self):
        self.registry = build_registry(self.blobs, self.docs)

    def execute(self, graph: WorkflowGraph | None = None, cache: Cache | None = None):
        return engine.execute(
            graph if graph is not None else self.graph,
            self.registry,
            cache if cache is not None else self.cache,
            self.providers,
        )

    def output_hashes(self, graph: WorkflowGraph | None = None, cache: Cache | None = None) -> dict[str, str | None]:
        g = graph if graph is not None else self.graph
        c = cache if cache is not None else self.cache
        return {nid: engine.node_output_hash(g, nid, c) for nid in g.nodes}


def random_workbench(rng: random.Random) -> Workbench:
    blobs = BlobStore(None)
    cache = Cache(None, blobs)
    docs = DocumentStore(None)
    pool = build_doc_pool(blobs, cache, docs)
    providers = ProviderRegistry({"mock": MockProvider(blobs)}, "mock")

    g = WorkflowGraph(title="corpus")
    chosen = rng.sample(pool, k=rng.randint(1, len(pool)))
    for doc in chosen:
        g.add_node(
            NodeKind.FILE_SOURCE,
            {"doc_id": doc.doc_id, "origin": doc.origin, "content_hash": sha256_hex(canonicalize(doc))},
            node_id=f"src-{doc.doc_id}",
        )
    sources = list(g.nodes)

    extractors = []
    for i in range(rng.randint(1, 2)):
        node = g.add_node(
            NodeKind.RELEVANT_PAGE_EXTRACTOR,
            {
                "extraction_prompt": rng.choice(PROMPT_POOL),
                "mode": rng.choice(["two_stage", "exhaustive"]),
                "k": rng.choice([2, 4, 8]),
                "tau": rng.choice([0.2, 0.35]),
                "retrieval_mode": "text",
            },
            node_id=f"ext-{i}",
        )
        for port, src in enumerate(rng.sample(sources, k=rng.randint(1, len(sources)))):
            engine.connect(g, src, node.id, port)
        extractors.append(node.id)

    budget = 12 - len(g.nodes)
    if budget > 0 and rng.random() < 0.5:
        preview = g.add_node(NodeKind.PAGE_PREVIEW, node_id="preview-0")
        engine.connect(g, rng.choice(extractors), preview.id, 0)
        budget -= 1

    flavors = rng.sample(list(PLANNER_KINDS), k=min(rng.randint(1, 2), max(budget, 1)))
    for flavor in flavors:
        if budget <= 0:
            break
        planner_kind, viewer_kind, builder_kind = PLANNER_KINDS[flavor]
        planner = g.add_node(
            planner_kind,
            {"planning_prompt": rng.choice(PLAN_PROMPT_POOL)},
            node_id=f"plan-{flavor}",
        )
        budget -= 1
        for port, ext in enumerate(rng.sample(extractors, k=rng.randint(1, len(extractors)))):
            engine.connect(g, ext, planner.id, port)
        if budget > 0 and rng.random() < 0.8:
            viewer = g.add_node(viewer_kind, node_id=f"view-{flavor}")
            engine.connect(g, planner.id, viewer.id, 0)
            budget -= 1
            if budget > 0 and rng.random() < 0.4:
                builder = g.add_node(builder_kind, {"xlsx": flavor == "table"}, node_id=f"build-{flavor}")
                engine.connect(g, viewer.id, builder.id, 0)
                budget -= 1

    assert len(g.nodes) <= 12
    g.validate()
    return Workbench(graph=g, blobs=blobs, cache=cache, docs=docs, providers=providers)


def oracle_closure(graph: WorkflowGraph, origin: str) -> set[str]:
    """Brute-force dirty closure from the raw edge list, blocked at approvals."""
    approved = {nid for nid, node in graph.nodes.items() if node.approved}
    if origin in approved:
        return set()
    edges = [(e.src, e.dst) for e in graph.edges.values()]
    closure = {origin}
    changed = True
    while changed:
        changed = False
        for src, dst in edges:
            if src in closure and dst not in closure and dst not in approved:
                closure.add(dst)
                changed = True
    return closure


def random_edit(rng: random.Random, bench: Workbench) -> tuple[str, set[str]]:
    """Apply one random edit; returns (description, expected evaluation set)."""
    g = bench.graph
    kinds = ["config", "config", "config", "approve", "unapprove", "connect", "disconnect"]
    for _ in range(10):  # retry until an applicable edit is found
        choice = rng.choice(kinds)
        if choice == "config":
            nid = rng.choice(sorted(g.nodes))
            node = g.nodes[nid]
            if node.approved:
                continue
            config = dict(node.config)
            if node.kind is NodeKind.RELEVANT_PAGE_EXTRACTOR:
                field_name = rng.choice(["k", "tau", "extraction_prompt"])
                if field_name == "k":
                    config["k"] = rng.choice([2, 3, 4, 8, 99])
                elif field_name == "tau":
                    config["tau"] = rng.choice([0.2, 0.3, 0.35, 0.5])
                else:
                    config["extraction_prompt"] = rng.choice(PROMPT_POOL) + " now"
            elif node.kind in (NodeKind.DOCUMENT_PLANNER, NodeKind.SLIDE_DECK_PLANNER, NodeKind.SPREADSHEET_PLANNER):
                config["planning_prompt"] = config.get("planning_prompt", "") + " again"
            else:
                config["note"] = rng.randint(0, 10**6)
            expected = oracle_closure(g, nid)
            engine.set_config(g, nid, config)
            return f"config {nid}", expected
        if choice == "approve":
            candidates = [nid for nid, n in g.nodes.items() if n.state is NodeState.CLEAN and not n.approved]
            if not candidates:
                continue
            nid = rng.choice(sorted(candidates))
            engine.set_approval(g, nid, True, bench.cache)
            return f"approve {nid}", set()
        if choice == "unapprove":
            candidates = [nid for nid, n in g.nodes.items() if n.approved]
            if not candidates:
                continue
            nid = rng.choice(sorted(candidates))
            # compute the closure as if the node were already unapproved
            g.nodes[nid].approved = False
            expected = oracle_closure(g, nid)
            g.nodes[nid].approved = True
            engine.set_approval(g, nid, False, bench.cache)
            return f"unapprove {nid}", expected
        if choice == "connect":
            extractors = [nid for nid, n in g.nodes.items() if n.kind is NodeKind.RELEVANT_PAGE_EXTRACTOR]
            sources = [nid for nid, n in g.nodes.items() if n.kind is NodeKind.FILE_SOURCE]
            if not extractors or not sources:
                continue
            dst = rng.choice(sorted(extractors))
            src = rng.choice(sorted(sources))
            occupied = {e.port for e in g.in_edges(dst)}
            if any(e.src == src and e.dst == dst for e in g.edges.values()):
                continue
            port = max(occupied) + 1 if occupied else 0
            expected = oracle_closure(g, dst)
            with warnings.catch_warnings():
                # connecting into an approved node is a legal no-op dirty
                warnings.simplefilter("ignore")
                engine.connect(g, src, dst, port)
            return f"connect {src}->{dst}", expected
        if choice == "disconnect":
            removable = [
                e.id
                for e in g.edges.values()
                if g.nodes[e.dst].kind is NodeKind.RELEVANT_PAGE_EXTRACTOR and len(g.in_edges(e.dst)) > 1
            ]
            if not removable:
                continue
            edge_id = rng.choice(sorted(removable))
            dst = g.edges[edge_id].dst
            expected = oracle_closure(g, dst)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                engine.disconnect(g, edge_id)
            return f"disconnect {edge_id}", expected
    return "noop", set()


def full_recompute_copy(bench: Workbench) -> tuple[WorkflowGraph, Cache]:
    """Graph copy with all non-approved state cleared + an empty cache
    (shared blob store, so frozen outputs stay resolvable)."""
    g2 = bench.graph.copy()
    for node in g2.nodes.values():
        if node.approved:
            node.state = NodeState.CLEAN
            continue
        node.state = NodeState.PENDING
        node.last_fingerprint = None
        node.error = None
    return g2, Cache(None, bench.blobs)
