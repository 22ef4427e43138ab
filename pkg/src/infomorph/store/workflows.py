"""Workflow file persistence: canonical JSON, schema-versioned, validated on load."""

from __future__ import annotations

import json
import os
from pathlib import Path

from infomorph.content.canonical import sha256_hex
from infomorph.errors import ValidationError
from infomorph.graph.model import WorkflowGraph


def save_workflow(graph: WorkflowGraph, path: str | os.PathLike) -> None:
    graph.validate()
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    tmp = target.with_name(target.name + ".tmp")
    tmp.write_bytes(graph.canonical() + b"\n")
    os.replace(tmp, target)


def load_workflow(path: str | os.PathLike) -> WorkflowGraph:
    source = Path(path)
    try:
        data = json.loads(source.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ValidationError(f"no workflow file at {source}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"workflow file is not valid JSON: {exc}", path="$") from exc
    graph = WorkflowGraph.from_jsonable(data)
    graph.validate()
    return graph


def graph_hash(graph: WorkflowGraph) -> str:
    return sha256_hex(graph.canonical())
