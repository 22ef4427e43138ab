"""Graph mutation and the selective-recomputation execution driver.

The rules that make incremental execution sound:

  * Every mutation marks the affected node and its reachable descendants
    Dirty, except that propagation never passes through an approved node —
    its output is frozen, so inputs downstream of it provably cannot change.
  * A node's fingerprint digests its kind, canonical config, the ordered
    output hashes of its inputs, and the provider identity/model/params.
    Equal fingerprints reuse the cache with zero provider calls.
  * plan_execution returns exactly the Pending/Dirty non-approved nodes in
    deterministic topological order (ties by ascending node id).
  * execute() tolerates failures: a failing node is marked Failed, its
    descendants stay Dirty and are reported as blocked, siblings complete.
    Failed nodes are retried on the next run.
"""

from __future__ import annotations

import heapq
import warnings
from dataclasses import dataclass, field
from typing import Any, Callable

from infomorph.content.canonical import canonical_bytes, canonicalize, parse_content, sha256_hex
from infomorph.errors import (
    ArityExceeded,
    ApprovedLocked,
    CycleError,
    EngineError,
    KindMismatch,
    NoOpWarning,
    NotClean,
    UnsatisfiedInput,
)
from infomorph.graph.kinds import PORT_SPECS, NodeKind, output_kind
from infomorph.graph.model import Node, NodeState, WorkflowGraph
from infomorph.providers.base import CountingProvider, Provider, ProviderRegistry
from infomorph.store.blobs import BlobStore
from infomorph.store.cache import Cache

EventCallback = Callable[[str, str, dict], None]  # (node_id, event, detail)


# -- mutation ------------------------------------------------------------------

def connect(graph: WorkflowGraph, src: str, dst: str, port: int, edge_id: str | None = None) -> str:
    """Add a typed edge; the graph is left untouched on any rejection."""
    source = graph.node(src)
    target = graph.node(dst)
    spec = PORT_SPECS[target.kind]
    accepts = spec.accepts_at(port)
    if accepts is None:
        raise ArityExceeded(
            f"{target.kind.value} accepts at most {spec.max_inputs} inputs; port {port} is out of range"
        )
    if any(e.dst == dst and e.port == port for e in graph.edges.values()):
        raise ArityExceeded(f"port {port} of {dst} is already occupied")
    produced = output_kind(source.kind)
    if produced not in accepts:
        raise KindMismatch(
            f"{source.kind.value} produces {produced}, not accepted at {target.kind.value} port {port}"
        )
    if graph.has_path(dst, src):
        raise CycleError(f"edge {src}->{dst} would create a cycle")
    if edge_id is None:
        edge_id = graph.new_edge_id()
    elif edge_id in graph.edges:
        raise ArityExceeded(f"edge id {edge_id!r} already exists")
    from infomorph.graph.model import Edge

    graph.edges[edge_id] = Edge(id=edge_id, src=src, dst=dst, port=port)
    propagate_dirty(graph, dst)
    return edge_id


def disconnect(graph: WorkflowGraph, edge_id: str) -> None:
    edge = graph.edge(edge_id)
    del graph.edges[edge_id]
    propagate_dirty(graph, edge.dst)


def set_config(graph: WorkflowGraph, node_id: str, config: dict) -> Node:
    """Replace a node's config. Rejected while the node is approved."""
    node = graph.node(node_id)
    if node.approved:
        raise ApprovedLocked(f"node {node_id} is approved; unapprove before editing its config")
    canonical_bytes(config)  # reject unserializable configs before mutating
    node.config = dict(config)
    propagate_dirty(graph, node_id)
    return node


# -- ordering and dirtiness ------------------------------------------------------

def topo_order(graph: WorkflowGraph) -> list[str]:
    """Deterministic topological order, ties broken by ascending node id."""
    indeg = {nid: 0 for nid in graph.nodes}
    adjacency: dict[str, list[str]] = {nid: [] for nid in graph.nodes}
    for edge in graph.edges.values():  # parallel edges count once each
        indeg[edge.dst] += 1
        adjacency[edge.src].append(edge.dst)
    heap = [nid for nid, d in indeg.items() if d == 0]
    heapq.heapify(heap)
    order: list[str] = []
    while heap:
        nid = heapq.heappop(heap)
        order.append(nid)
        for nxt in adjacency[nid]:
            indeg[nxt] -= 1
            if indeg[nxt] == 0:
                heapq.heappush(heap, nxt)
    if len(order) != len(graph.nodes):
        raise CycleError("workflow graph contains a cycle")
    return order


def propagate_dirty(graph: WorkflowGraph, origin: str) -> set[str]:
    """Mark origin and reachable descendants Dirty, stopping at approved nodes.

    Dirtying an approved node directly is a warning no-op: its output is
    frozen, so nothing downstream can have changed.
    """
    node = graph.node(origin)
    if node.approved:
        warnings.warn(f"node {origin} is approved; revoke approval before recomputing", NoOpWarning)
        return set()
    dirtied: set[str] = set()
    stack = [origin]
    while stack:
        nid = stack.pop()
        if nid in dirtied:
            continue
        current = graph.nodes[nid]
        if current.approved:
            continue  # frozen: do not mark, do not pass through
        current.state = NodeState.DIRTY
        current.error = None
        dirtied.add(nid)
        stack.extend(graph.successors(nid))
    return dirtied


def set_approval(graph: WorkflowGraph, node_id: str, approved: bool, cache: Cache) -> Node:
    node = graph.node(node_id)
    if approved:
        if node.approved:
            return node
        if node.state is not NodeState.CLEAN:
            raise NotClean(f"cannot approve node {node_id} in state {node.state.value}")
        digest = node.frozen_output or cache.get(node.last_fingerprint)
        if digest is None:
            raise NotClean(f"node {node_id} has no retrievable output to freeze")
        node.approved = True
        node.frozen_output = digest
        return node
    if not node.approved:
        return node
    node.approved = False
    node.frozen_output = None
    propagate_dirty(graph, node_id)
    return node


# -- planning ---------------------------------------------------------------------

_NEEDS_EVAL = (NodeState.PENDING, NodeState.DIRTY)


def plan_execution(graph: WorkflowGraph, targets: list[str] | None = None) -> list[str]:
    """Pending/Dirty non-approved nodes in topological order.

    With ``targets``, restricted to the targets and their ancestors. Raises
    UnsatisfiedInput when a planned node depends on a Failed producer that is
    not itself being replanned.
    """
    order = topo_order(graph)
    allowed: set[str] | None = None
    if targets is not None:
        allowed = set()
        for target in targets:
            graph.node(target)
            allowed.add(target)
            stack = [target]
            while stack:
                for prev in graph.predecessors(stack.pop()):
                    if prev not in allowed:
                        allowed.add(prev)
                        stack.append(prev)
    plan = [
        nid
        for nid in order
        if not graph.nodes[nid].approved
        and graph.nodes[nid].state in _NEEDS_EVAL
        and (allowed is None or nid in allowed)
    ]
    planned = set(plan)
    for nid in plan:
        for edge in graph.in_edges(nid):
            producer = graph.nodes[edge.src]
            if producer.state is NodeState.FAILED and edge.src not in planned:
                raise UnsatisfiedInput(f"node {nid} depends on failed node {edge.src}")
    return plan


# -- fingerprinting ------------------------------------------------------------------

def fingerprint(node: Node, input_hashes: list[str], provider: Provider) -> str:
    payload = {
        "kind": node.kind.value,
        "config": node.config,
        "inputs": input_hashes,
        "provider": {
            "id": provider.provider_id,
            "model": node.config.get("model", "default"),
            "params": provider.fingerprint_params(),
        },
    }
    return sha256_hex(canonical_bytes(payload))


# -- execution ------------------------------------------------------------------------

@dataclass
class ExecutionReport:
    evaluated: list[str] = field(default_factory=list)
    cache_hits: list[str] = field(default_factory=list)
    provider_calls: int = 0
    failures: list[dict] = field(default_factory=list)
    blocked: list[str] = field(default_factory=list)

    def to_jsonable(self) -> dict:
        return {
            "evaluated": self.evaluated,
            "cache_hits": self.cache_hits,
            "provider_calls": self.provider_calls,
            "failures": self.failures,
            "blocked": self.blocked,
        }


@dataclass(frozen=True)
class EvalContext:
    """Everything an evaluator may look at; purity contract: the output must be
    a function of (config, input content, provider) only."""

    node_id: str
    config: dict
    inputs: list[Any]
    provider: Provider
    blobs: BlobStore
    docs: Any


class EvaluatorRegistry:
    """NodeKind -> evaluator, plus the stores evaluators are allowed to read."""

    def __init__(self, evaluators: dict[NodeKind, Callable[[EvalContext], Any]], blobs: BlobStore, docs: Any):
        self.evaluators = evaluators
        self.blobs = blobs
        self.docs = docs

    def evaluator(self, kind: NodeKind) -> Callable[[EvalContext], Any]:
        try:
            return self.evaluators[kind]
        except KeyError:
            raise EngineError(f"no evaluator registered for {kind.value}") from None


def _missing_required_port(graph: WorkflowGraph, node: Node) -> str | None:
    spec = PORT_SPECS[node.kind]
    filled = {e.port for e in graph.in_edges(node.id)}
    if spec.variadic:
        # variadic ports are interchangeable slots: any min_inputs edges satisfy
        if len(filled) < spec.min_inputs:
            return f"needs at least {spec.min_inputs} inputs, has {len(filled)}"
        return None
    for i, port in enumerate(spec.ports):
        if port.required and i not in filled:
            return f"missing required input at port {i}"
    return None


def execute(
    graph: WorkflowGraph,
    registry: EvaluatorRegistry,
    cache: Cache,
    providers: ProviderRegistry,
    targets: list[str] | None = None,
    on_event: EventCallback | None = None,
) -> ExecutionReport:
    """Evaluate exactly what changed, reusing cached outputs everywhere else.

    Per node: compute the fingerprint from the (already resolved) input output
    hashes; on a cache hit reuse the stored output with zero provider calls;
    otherwise run the evaluator and store the result under the fingerprint.
    Approved nodes contribute their frozen output without evaluation. Node
    failures are recorded in the report, never raised.
    """
    graph.validate()
    report = ExecutionReport()
    emit = on_event or (lambda nid, event, detail: None)

    counters: dict[str, CountingProvider] = {}

    def counted(provider: Provider) -> CountingProvider:
        wrapper = counters.get(provider.provider_id)
        if wrapper is None:
            wrapper = CountingProvider(provider)
            counters[provider.provider_id] = wrapper
        return wrapper

    allowed: set[str] | None = None
    if targets is not None:
        allowed = set()
        for target in targets:
            graph.node(target)
            allowed.add(target)
            stack = [target]
            while stack:
                for prev in graph.predecessors(stack.pop()):
                    if prev not in allowed:
                        allowed.add(prev)
                        stack.append(prev)

    outputs: dict[str, str | None] = {}
    for nid in topo_order(graph):
        node = graph.nodes[nid]
        out_of_scope = allowed is not None and nid not in allowed

        if node.approved:
            outputs[nid] = node.frozen_output
            if node.frozen_output and not registry.blobs.has(node.frozen_output):
                outputs[nid] = None
                report.failures.append({"node": nid, "error": "frozen output missing from blob store"})
                emit(nid, "failed", {"error": "frozen output missing"})
            else:
                emit(nid, "cache-hit", {"frozen": True})
            continue

        needs_eval = node.state in _NEEDS_EVAL or node.state is NodeState.FAILED
        if node.state is NodeState.CLEAN:
            digest = cache.get(node.last_fingerprint)
            if digest is not None:
                outputs[nid] = digest
                emit(nid, "cache-hit", {"stored": True})
                continue
            # Invariant repair: a Clean node whose cache entry was evicted or
            # corrupted is recomputed rather than served stale.
            node.state = NodeState.DIRTY
            needs_eval = True

        if out_of_scope or not needs_eval:
            outputs[nid] = None
            continue

        arity_error = _missing_required_port(graph, node)
        if arity_error is not None:
            node.state = NodeState.FAILED
            node.error = arity_error
            report.failures.append({"node": nid, "error": arity_error})
            emit(nid, "failed", {"error": arity_error})
            continue

        in_edges = graph.in_edges(nid)
        input_hashes = [outputs.get(e.src) for e in in_edges]
        if any(h is None for h in input_hashes):
            node.state = NodeState.DIRTY
            report.blocked.append(nid)
            continue

        provider = counted(providers.for_config(node.config))
        fp = fingerprint(node, input_hashes, provider)  # type: ignore[arg-type]
        node.last_fingerprint = fp
        cached = cache.get(fp)
        if cached is not None:
            outputs[nid] = cached
            node.state = NodeState.CLEAN
            node.error = None
            report.evaluated.append(nid)
            report.cache_hits.append(nid)
            emit(nid, "cache-hit", {})
            continue

        node.state = NodeState.RUNNING
        emit(nid, "running", {})
        try:
            inputs = [parse_content(registry.blobs.get(h)) for h in input_hashes]  # type: ignore[arg-type]
            ctx = EvalContext(
                node_id=nid,
                config=node.config,
                inputs=inputs,
                provider=provider,
                blobs=registry.blobs,
                docs=registry.docs,
            )
            content = registry.evaluator(node.kind)(ctx)
            data = canonicalize(content)
            digest = sha256_hex(data)
            cache.put(fp, digest, data)
        except EngineError as exc:
            node.state = NodeState.FAILED
            node.error = str(exc)
            report.evaluated.append(nid)
            report.failures.append({"node": nid, "error": str(exc)})
            emit(nid, "failed", {"error": str(exc)})
            continue
        outputs[nid] = digest
        node.state = NodeState.CLEAN
        node.error = None
        report.evaluated.append(nid)
        emit(nid, "clean", {"hash": digest})

    report.provider_calls = sum(c.calls for c in counters.values())
    return report


def node_output_hash(graph: WorkflowGraph, node_id: str, cache: Cache) -> str | None:
    """Current output hash of a node: frozen when approved, else via cache."""
    node = graph.node(node_id)
    if node.approved:
        return node.frozen_output
    if node.state is not NodeState.CLEAN:
        return None
    return cache.get(node.last_fingerprint)
