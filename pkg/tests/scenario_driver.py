"""Scenario replay driver: ingest the committed corpus, triage, synthesize,
execute, approve, then merge-replan with the late-arriving program document.

Shared by the acceptance suite and scripts/freeze_goldens.py so the committed
golden hashes are produced by exactly the code path the tests assert.
"""

from __future__ import annotations

from dataclasses import replace
from pathlib import Path

from infomorph.content.canonical import canonicalize, parse_content, sha256_hex
from infomorph.graph import engine
from infomorph.graph.kinds import NodeKind
from infomorph.ingest.ingestion import Ingestor
from infomorph.ops.registry import build_registry
from infomorph.ops.synthesize import synthesize_workflow
from infomorph.ops.triage import triage_sources
from infomorph.providers.base import ProviderRegistry
from infomorph.providers.mock import MockProvider
from infomorph.store.blobs import BlobStore
from infomorph.store.cache import Cache
from infomorph.store.docs import DocumentStore

GOAL = "I need a budget estimate and itinerary ideas."

FIXTURE_FILES = [
    "conference_program.txt",
    "hiking_guide.txt",
    "receipts.pdf",
    "travel_blog.html",
    "trip_notes.docx",
    "winter_festival.pptx",
]

MERGE_PROMPT = (
    "Merge the extracted talks into the existing itinerary. Keep the structure "
    "intact, adjusting nearby items only when needed."
)

MERGE_EXTRACTION_PROMPT = "Extract talks and sessions on human computer interaction."


class Scenario:
    def __init__(self, data_dir: Path, fixtures_dir: Path):
        self.fixtures_dir = fixtures_dir
        self.blobs = BlobStore(data_dir / "blobs")
        self.cache = Cache(data_dir / "cache", self.blobs)
        self.docs = DocumentStore(data_dir / "documents")
        self.provider = MockProvider(self.blobs)
        self.providers = ProviderRegistry({"mock": self.provider}, "mock")
        self.registry = build_registry(self.blobs, self.docs)
        self.ids_by_name: dict[str, str] = {}

    def ingest_corpus(self) -> None:
        ing = Ingestor(self.blobs, self.cache)
        for name in FIXTURE_FILES:
            doc = ing.ingest_file(str(self.fixtures_dir / name))
            # fixture-relative origin keeps golden hashes machine-independent
            doc = replace(doc, origin=f"busan/{name}")
            doc = ing.enrich(doc, self.provider)
            self.docs.save(doc)
            self.ids_by_name[name] = doc.doc_id

    def triage(self):
        transcript = (self.fixtures_dir / "chat.txt").read_text(encoding="utf-8")
        docs = [self.docs.load(i) for i in self.docs.ids()]
        return triage_sources(transcript, docs, self.provider)

    def synthesize(self, triage):
        docs = [self.docs.load(i) for i in self.docs.ids()]
        graph = synthesize_workflow(GOAL, triage, docs)
        # builder for the budget table (drives format conformance + export)
        graph.add_node(NodeKind.SPREADSHEET_BUILDER, {"xlsx": True}, node_id="build-table")
        engine.connect(graph, "view-table", "build-table", 0)
        return graph

    def execute(self, graph, targets=None):
        return engine.execute(graph, self.registry, self.cache, self.providers, targets=targets)

    def output(self, graph, node_id: str):
        digest = engine.node_output_hash(graph, node_id, self.cache)
        if digest is None:
            return None, None
        return digest, parse_content(self.blobs.get(digest))

    def ingest_program_final(self) -> str:
        ing = Ingestor(self.blobs, self.cache)
        doc = ing.ingest_file(str(self.fixtures_dir / "later" / "program_final.pdf"))
        doc = replace(doc, origin="busan/later/program_final.pdf")
        doc = ing.enrich(doc, self.provider)
        self.docs.save(doc)
        return doc.doc_id

    def add_merge_branch(self, graph, program_doc_id: str) -> None:
        doc = self.docs.load(program_doc_id)
        graph.add_node(
            NodeKind.FILE_SOURCE,
            {
                "doc_id": program_doc_id,
                "origin": doc.origin,
                "content_hash": sha256_hex(canonicalize(doc)),
            },
            node_id="src-program",
        )
        graph.add_node(
            NodeKind.RELEVANT_PAGE_EXTRACTOR,
            {
                "extraction_prompt": MERGE_EXTRACTION_PROMPT,
                "mode": "two_stage",
                "k": 8,
                "retrieval_mode": "text",
                "tau": 0.35,
            },
            node_id="extract-merge",
        )
        graph.add_node(NodeKind.DOCUMENT_PLANNER, {"planning_prompt": MERGE_PROMPT}, node_id="plan-merge")
        graph.add_node(NodeKind.DOCUMENT_EDITOR, node_id="view-merge")
        engine.connect(graph, "src-program", "extract-merge", 0)
        engine.connect(graph, "view-document", "plan-merge", 0)  # approved prior itinerary
        engine.connect(graph, "extract-merge", "plan-merge", 1)
        engine.connect(graph, "plan-merge", "view-merge", 0)


def run_scenario(data_dir: Path, fixtures_dir: Path) -> dict:
    sc = Scenario(Path(data_dir), Path(fixtures_dir))
    sc.ingest_corpus()
    triage = sc.triage()
    graph = sc.synthesize(triage)
    report1 = sc.execute(graph)

    table_hash, table = sc.output(graph, "plan-table")
    itinerary_hash, itinerary = sc.output(graph, "view-document")
    artifact_hash, artifact = sc.output(graph, "build-table")

    engine.set_approval(graph, "view-document", True, sc.cache)
    program_doc_id = sc.ingest_program_final()
    sc.add_merge_branch(graph, program_doc_id)
    report2 = sc.execute(graph)
    merge_hash, merged = sc.output(graph, "plan-merge")

    # the approved itinerary must be untouched by the merge execution
    frozen_hash, _ = sc.output(graph, "view-document")

    return {
        "scenario": sc,
        "graph": graph,
        "triage": triage,
        "reports": [report1, report2],
        "table": table,
        "itinerary": itinerary,
        "artifact": artifact,
        "merged": merged,
        "hashes": {
            "plan-table": table_hash,
            "view-document": itinerary_hash,
            "build-table": artifact_hash,
            "plan-merge": merge_hash,
            "view-document-after-merge": frozen_hash,
        },
        "doc_ids": dict(sc.ids_by_name),
    }
