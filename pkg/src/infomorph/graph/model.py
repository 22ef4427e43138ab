"""Workflow graph structure: nodes, edges, states, and structural validation.

Mutation goes through infomorph.graph.engine so that dirty propagation and
approval rules are never bypassed; this module owns shape and serialization.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterator

from infomorph.content.canonical import canonical_bytes, sha256_hex
from infomorph.errors import ValidationError
from infomorph.graph.kinds import PORT_SPECS, NodeKind, output_kind

SCHEMA_VERSION = 1


class NodeState(str, Enum):
    PENDING = "pending"
    DIRTY = "dirty"
    RUNNING = "running"
    CLEAN = "clean"
    FAILED = "failed"


@dataclass
class Node:
    id: str
    kind: NodeKind
    config: dict = field(default_factory=dict)
    state: NodeState = NodeState.PENDING
    error: str | None = None
    approved: bool = False
    frozen_output: str | None = None
    last_fingerprint: str | None = None

    def to_jsonable(self) -> dict:
        return {
            "kind": self.kind.value,
            "config": self.config,
            "state": self.state.value,
            "error": self.error,
            "approved": self.approved,
            "frozen_output": self.frozen_output,
            "last_fingerprint": self.last_fingerprint,
        }


@dataclass(frozen=True)
class Edge:
    id: str
    src: str
    dst: str
    port: int

    def to_jsonable(self) -> dict:
        return {"id": self.id, "from": self.src, "to": self.dst, "port": self.port}


class WorkflowGraph:
    def __init__(self, title: str = "", created_at: str | None = None):
        self.schema_version = SCHEMA_VERSION
        self.title = title
        self.created_at = created_at
        self.layout: dict[str, Any] = {}  # presentation-only; never fingerprinted
        self.nodes: dict[str, Node] = {}
        self.edges: dict[str, Edge] = {}

    # -- construction -------------------------------------------------------

    def new_node_id(self) -> str:
        n = len(self.nodes) + 1
        while f"n{n:03d}" in self.nodes:
            n += 1
        return f"n{n:03d}"

    def new_edge_id(self) -> str:
        n = len(self.edges) + 1
        while f"e{n:03d}" in self.edges:
            n += 1
        return f"e{n:03d}"

    def add_node(self, kind: NodeKind, config: dict | None = None, node_id: str | None = None) -> Node:
        nid = node_id or self.new_node_id()
        if nid in self.nodes:
            raise ValidationError(f"duplicate node id {nid!r}", path=f"$.nodes.{nid}")
        node = Node(id=nid, kind=kind, config=dict(config or {}))
        self.nodes[nid] = node
        return node

    def node(self, node_id: str) -> Node:
        from infomorph.errors import UnknownId

        try:
            return self.nodes[node_id]
        except KeyError:
            raise UnknownId(f"no node {node_id!r}") from None

    def edge(self, edge_id: str) -> Edge:
        from infomorph.errors import UnknownId

        try:
            return self.edges[edge_id]
        except KeyError:
            raise UnknownId(f"no edge {edge_id!r}") from None

    # -- topology ------------------------------------------------------------

    def in_edges(self, node_id: str) -> list[Edge]:
        return sorted((e for e in self.edges.values() if e.dst == node_id), key=lambda e: (e.port, e.id))

    def out_edges(self, node_id: str) -> list[Edge]:
        return sorted((e for e in self.edges.values() if e.src == node_id), key=lambda e: (e.dst, e.id))

    def successors(self, node_id: str) -> list[str]:
        return sorted({e.dst for e in self.edges.values() if e.src == node_id})

    def predecessors(self, node_id: str) -> list[str]:
        return sorted({e.src for e in self.edges.values() if e.dst == node_id})

    def has_path(self, start: str, target: str) -> bool:
        if start == target:
            return True
        stack = [start]
        seen = {start}
        while stack:
            for nxt in self.successors(stack.pop()):
                if nxt == target:
                    return True
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return False

    def descendants(self, node_id: str) -> set[str]:
        out: set[str] = set()
        stack = [node_id]
        while stack:
            for nxt in self.successors(stack.pop()):
                if nxt not in out:
                    out.add(nxt)
                    stack.append(nxt)
        return out

    def __iter__(self) -> Iterator[Node]:
        return iter(self.nodes.values())

    # -- validation ------------------------------------------------------------

    def validate(self) -> None:
        """Structural invariants: endpoints exist, ports typed, acyclic, arity caps."""
        occupied: set[tuple[str, int]] = set()
        for eid, edge in self.edges.items():
            where = f"$.edges.{eid}"
            if edge.src not in self.nodes:
                raise ValidationError(f"edge {eid} references unknown node {edge.src!r}", path=where)
            if edge.dst not in self.nodes:
                raise ValidationError(f"edge {eid} references unknown node {edge.dst!r}", path=where)
            spec = PORT_SPECS[self.nodes[edge.dst].kind]
            accepts = spec.accepts_at(edge.port)
            if accepts is None:
                raise ValidationError(f"edge {eid} exceeds port arity of {self.nodes[edge.dst].kind.value}", path=where)
            produced = output_kind(self.nodes[edge.src].kind)
            if produced not in accepts:
                raise ValidationError(
                    f"edge {eid}: {produced} not accepted at {self.nodes[edge.dst].kind.value} port {edge.port}",
                    path=where,
                )
            key = (edge.dst, edge.port)
            if key in occupied:
                raise ValidationError(f"edge {eid}: port {edge.port} of {edge.dst} already occupied", path=where)
            occupied.add(key)
        for nid, node in self.nodes.items():
            spec = PORT_SPECS[node.kind]
            if spec.max_inputs is not None and len(self.in_edges(nid)) > spec.max_inputs:
                raise ValidationError(f"node {nid} exceeds max inputs {spec.max_inputs}", path=f"$.nodes.{nid}")
            if node.approved and node.frozen_output is None:
                raise ValidationError(f"approved node {nid} lacks a frozen output", path=f"$.nodes.{nid}")
        self._check_acyclic()

    def _check_acyclic(self) -> None:
        from infomorph.errors import CycleError

        indeg = {nid: 0 for nid in self.nodes}
        adjacency: dict[str, list[str]] = {nid: [] for nid in self.nodes}
        for edge in self.edges.values():  # parallel edges count once each
            indeg[edge.dst] += 1
            adjacency[edge.src].append(edge.dst)
        ready = [nid for nid, d in indeg.items() if d == 0]
        seen = 0
        while ready:
            nid = ready.pop()
            seen += 1
            for nxt in adjacency[nid]:
                indeg[nxt] -= 1
                if indeg[nxt] == 0:
                    ready.append(nxt)
        if seen != len(self.nodes):
            raise CycleError("workflow graph contains a cycle")

    # -- serialization -----------------------------------------------------------

    def to_jsonable(self) -> dict:
        metadata: dict[str, Any] = {"title": self.title, "created_at": self.created_at}
        if self.layout:
            metadata["layout"] = self.layout
        return {
            "schema_version": self.schema_version,
            "metadata": metadata,
            "nodes": {nid: node.to_jsonable() for nid, node in sorted(self.nodes.items())},
            "edges": [self.edges[eid].to_jsonable() for eid in sorted(self.edges)],
        }

    @classmethod
    def from_jsonable(cls, data: dict) -> "WorkflowGraph":
        from infomorph.errors import SchemaVersionUnsupported

        version = data.get("schema_version")
        if version != SCHEMA_VERSION:
            raise SchemaVersionUnsupported(f"unsupported workflow schema_version {version!r} (supported: {SCHEMA_VERSION})")
        metadata = data.get("metadata", {})
        graph = cls(title=metadata.get("title", ""), created_at=metadata.get("created_at"))
        graph.layout = dict(metadata.get("layout", {}))
        for nid, raw in data.get("nodes", {}).items():
            try:
                kind = NodeKind(raw["kind"])
            except (KeyError, ValueError):
                raise ValidationError(f"unknown node kind {raw.get('kind')!r}", path=f"$.nodes.{nid}.kind") from None
            try:
                state = NodeState(raw.get("state", "pending"))
            except ValueError:
                raise ValidationError(f"unknown node state {raw.get('state')!r}", path=f"$.nodes.{nid}.state") from None
            graph.nodes[nid] = Node(
                id=nid,
                kind=kind,
                config=dict(raw.get("config", {})),
                state=state,
                error=raw.get("error"),
                approved=bool(raw.get("approved", False)),
                frozen_output=raw.get("frozen_output"),
                last_fingerprint=raw.get("last_fingerprint"),
            )
        for raw in data.get("edges", []):
            edge = Edge(id=raw["id"], src=raw["from"], dst=raw["to"], port=int(raw.get("port", 0)))
            if edge.id in graph.edges:
                raise ValidationError(f"duplicate edge id {edge.id!r}", path=f"$.edges.{edge.id}")
            graph.edges[edge.id] = edge
        return graph

    def canonical(self) -> bytes:
        return canonical_bytes(self.to_jsonable())

    def hash(self) -> str:
        return sha256_hex(self.canonical())

    def copy(self) -> "WorkflowGraph":
        return WorkflowGraph.from_jsonable(self.to_jsonable())
