"""Server-side state: stores, provider registry, workflows, executions."""

from __future__ import annotations

import secrets
import threading
from dataclasses import dataclass, field
from pathlib import Path

from infomorph.errors import EngineError, UnknownId
from infomorph.graph.model import WorkflowGraph
from infomorph.ingest.ingestion import Ingestor
from infomorph.ops.registry import build_registry
from infomorph.providers.base import Provider, ProviderRegistry
from infomorph.providers.http import HttpProvider
from infomorph.providers.mock import MockProvider
from infomorph.service.config import ServiceConfig
from infomorph.store.blobs import BlobStore
from infomorph.store.cache import Cache
from infomorph.store.docs import DocumentStore
from infomorph.store.workflows import save_workflow


class ExecutionRecord:
    """Event log of one execution; supports replay plus live following."""

    def __init__(self, execution_id: str, workflow_id: str):
        self.id = execution_id
        self.workflow_id = workflow_id
        self.events: list[dict] = []
        self.report: dict | None = None
        self._condition = threading.Condition()
        self.done = False

    def emit(self, event: dict) -> None:
        with self._condition:
            self.events.append(event)
            self._condition.notify_all()

    def finish(self, report: dict) -> None:
        with self._condition:
            self.report = report
            self.done = True
            self._condition.notify_all()

    def follow(self, timeout: float = 30.0):
        """Yield events from the start, then live until the execution is done."""
        index = 0
        while True:
            with self._condition:
                while index >= len(self.events) and not self.done:
                    if not self._condition.wait(timeout):
                        return
                batch = self.events[index:]
                index += len(batch)
                done = self.done and index >= len(self.events)
            for event in batch:
                yield event
            if done:
                return


@dataclass
class AppState:
    config: ServiceConfig
    blobs: BlobStore
    cache: Cache
    docs: DocumentStore
    providers: ProviderRegistry
    workflows: dict[str, WorkflowGraph] = field(default_factory=dict)
    executions: dict[str, ExecutionRecord] = field(default_factory=dict)
    locks: dict[str, threading.Lock] = field(default_factory=dict)
    mutate_lock: threading.Lock = field(default_factory=threading.Lock)

    @property
    def registry(self):
        return build_registry(self.blobs, self.docs)

    @property
    def ingestor(self) -> Ingestor:
        return Ingestor(self.blobs, self.cache)

    # -- workflow plumbing ---------------------------------------------------

    def workflow_dir(self) -> Path:
        return self.config.data_path / "workflows"

    def new_id(self, prefix: str) -> str:
        return f"{prefix}-{secrets.token_hex(4)}"

    def persist(self, workflow_id: str) -> None:
        save_workflow(self.workflows[workflow_id], self.workflow_dir() / f"{workflow_id}.json")

    def workflow(self, workflow_id: str) -> WorkflowGraph:
        try:
            return self.workflows[workflow_id]
        except KeyError:
            raise UnknownId(f"no workflow {workflow_id!r}") from None

    def execution_lock(self, workflow_id: str) -> threading.Lock:
        return self.locks.setdefault(workflow_id, threading.Lock())

    def find_node(self, node_id: str) -> tuple[str, WorkflowGraph]:
        owners = [wid for wid, g in self.workflows.items() if node_id in g.nodes]
        if not owners:
            raise UnknownId(f"no node {node_id!r}")
        if len(owners) > 1:
            raise AmbiguousNode(f"node id {node_id!r} exists in {len(owners)} workflows")
        return owners[0], self.workflows[owners[0]]

    def find_edge(self, edge_id: str) -> tuple[str, WorkflowGraph]:
        owners = [wid for wid, g in self.workflows.items() if edge_id in g.edges]
        if not owners:
            raise UnknownId(f"no edge {edge_id!r}")
        if len(owners) > 1:
            raise AmbiguousNode(f"edge id {edge_id!r} exists in {len(owners)} workflows")
        return owners[0], self.workflows[owners[0]]


class AmbiguousNode(EngineError):
    code = "ambiguous-node"
    http_status = 409


class ExecutionBusy(EngineError):
    code = "execution-busy"
    http_status = 409


def build_state(config: ServiceConfig) -> AppState:
    data = config.data_path
    blobs = BlobStore(data / "blobs")
    cache = Cache(data / "cache", blobs)
    docs = DocumentStore(data / "documents")
    providers: dict[str, Provider] = {"mock": MockProvider(blobs)}
    default = "mock"
    if config.provider.kind == "http" and config.provider.endpoint:
        provider = HttpProvider(
            endpoint=config.provider.endpoint,
            name=config.provider.name,
            token=config.provider.token or None,
            blobs=blobs,
        )
        providers[provider.provider_id] = provider
        default = provider.provider_id
    state = AppState(
        config=config,
        blobs=blobs,
        cache=cache,
        docs=docs,
        providers=ProviderRegistry(providers, default),
    )
    # Reload persisted workflows so approvals and states survive restarts.
    from infomorph.store.workflows import load_workflow

    wf_dir = state.workflow_dir()
    if wf_dir.exists():
        for path in sorted(wf_dir.glob("*.json")):
            state.workflows[path.stem] = load_workflow(path)
    return state
