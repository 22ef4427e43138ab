from infomorph.graph.engine import (
    EvalContext,
    EvaluatorRegistry,
    ExecutionReport,
    connect,
    disconnect,
    execute,
    fingerprint,
    node_output_hash,
    plan_execution,
    propagate_dirty,
    set_approval,
    set_config,
    topo_order,
)
from infomorph.graph.kinds import (
    BUILDER_KINDS,
    PLANNER_KINDS,
    PORT_SPECS,
    PROVIDER_BACKED_KINDS,
    SOURCE_KINDS,
    TAXONOMY,
    VIEWER_KINDS,
    NodeKind,
    PortDef,
    PortSpec,
    output_kind,
)
from infomorph.graph.model import SCHEMA_VERSION, Edge, Node, NodeState, WorkflowGraph

__all__ = [
    "BUILDER_KINDS",
    "Edge",
    "EvalContext",
    "EvaluatorRegistry",
    "ExecutionReport",
    "Node",
    "NodeKind",
    "NodeState",
    "PLANNER_KINDS",
    "PORT_SPECS",
    "PROVIDER_BACKED_KINDS",
    "PortDef",
    "PortSpec",
    "SCHEMA_VERSION",
    "SOURCE_KINDS",
    "TAXONOMY",
    "VIEWER_KINDS",
    "WorkflowGraph",
    "connect",
    "disconnect",
    "execute",
    "fingerprint",
    "node_output_hash",
    "output_kind",
    "plan_execution",
    "propagate_dirty",
    "set_approval",
    "set_config",
    "topo_order",
]
