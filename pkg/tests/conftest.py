from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from infomorph.content.canonical import canonicalize, sha256_hex
from infomorph.content.model import Document, Page
from infomorph.graph import engine
from infomorph.graph.kinds import NodeKind
from infomorph.graph.model import WorkflowGraph
from infomorph.ingest.ingestion import Ingestor
from infomorph.ops.registry import build_registry
from infomorph.providers.base import ProviderRegistry
from infomorph.providers.mock import MockProvider
from infomorph.store.blobs import BlobStore
from infomorph.store.cache import Cache
from infomorph.store.docs import DocumentStore


@pytest.fixture
def blobs():
    return BlobStore(None)


@pytest.fixture
def cache(blobs):
    return Cache(None, blobs)


@pytest.fixture
def docs():
    return DocumentStore(None)


@pytest.fixture
def mock_provider(blobs):
    return MockProvider(blobs)


@pytest.fixture
def providers(mock_provider):
    return ProviderRegistry({"mock": mock_provider}, "mock")


@pytest.fixture
def registry(blobs, docs):
    return build_registry(blobs, docs)


def make_document(doc_id: str, texts: list[str], title: str = "", media_kind: str = "text") -> Document:
    pages = tuple(Page(index=i + 1, text=t) for i, t in enumerate(texts))
    return Document(
        doc_id=doc_id,
        origin=f"/fixtures/{doc_id}.txt",
        media_kind=media_kind,
        title=title or doc_id,
        pages=pages,
    )


@pytest.fixture
def trip_doc(blobs, cache, docs, mock_provider):
    doc = make_document(
        "d1",
        [
            "Flight to Busan costs $620 round trip. Baggage fees add $40. Known expenses are listed below.",
            "Historical sites tour. Family activities near the harbor include seafood tastings.",
            "Hotel accommodation costs $130 per night. Conference registration fee is $450.",
        ],
        title="Trip notes",
    )
    doc = Ingestor(blobs, cache).enrich(doc, mock_provider)
    docs.save(doc)
    return doc


def build_chain(graph: WorkflowGraph, doc: Document):
    """src -> extractor -> planner(table) -> viewer -> builder chain for `doc`."""
    graph.add_node(
        NodeKind.FILE_SOURCE,
        {"doc_id": doc.doc_id, "content_hash": sha256_hex(canonicalize(doc))},
        node_id="src",
    )
    graph.add_node(
        NodeKind.RELEVANT_PAGE_EXTRACTOR,
        {"extraction_prompt": "Extract known expenses with costs and fees.", "mode": "exhaustive"},
        node_id="ext",
    )
    graph.add_node(
        NodeKind.SPREADSHEET_PLANNER,
        {"planning_prompt": "Create a budget. Limit it to three columns: Item, Estimated Cost (USD), and Notes."},
        node_id="plan",
    )
    graph.add_node(NodeKind.SPREADSHEET_VIEWER, node_id="view")
    graph.add_node(NodeKind.SPREADSHEET_BUILDER, {"xlsx": True}, node_id="build")
    engine.connect(graph, "src", "ext", 0)
    engine.connect(graph, "ext", "plan", 0)
    engine.connect(graph, "plan", "view", 0)
    engine.connect(graph, "view", "build", 0)
    return graph


@pytest.fixture
def chain_graph(trip_doc):
    return build_chain(WorkflowGraph(title="chain"), trip_doc)
