"""Headless CLI over the engine.

Exit codes: 0 success, 1 usage, 2 validation, 3 provider, 4 io. Every
command takes --json for machine-readable output. State lives under
--data-dir (default ./data, INFOMORPH_DATA_DIR override).
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from infomorph.errors import (
    EngineError,
    FetchError,
    NotText,
    ParseError,
    PlanParseError,
    ProviderUnavailable,
    UnsupportedFormat,
)
from infomorph.graph import engine
from infomorph.graph.kinds import BUILDER_KINDS
from infomorph.graph.model import NodeState
from infomorph.ingest.ingestion import Ingestor
from infomorph.ops.registry import build_registry
from infomorph.ops.synthesize import synthesize_workflow
from infomorph.ops.triage import SourceTriage, triage_sources
from infomorph.providers.base import ProviderRegistry
from infomorph.providers.http import HttpProvider
from infomorph.providers.mock import MockProvider
from infomorph.service.config import load_config
from infomorph.store.blobs import BlobStore
from infomorph.store.cache import Cache
from infomorph.store.docs import DocumentStore
from infomorph.store.workflows import load_workflow, save_workflow

EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_PROVIDER = 3
EXIT_IO = 4

_IO_ERRORS = (ParseError, FetchError, NotText, UnsupportedFormat)
_PROVIDER_ERRORS = (ProviderUnavailable, PlanParseError)


class Env:
    def __init__(self, data_dir: str, provider_endpoint: str | None, provider_token: str | None):
        data = Path(data_dir)
        self.data_dir = data
        self.blobs = BlobStore(data / "blobs")
        self.cache = Cache(data / "cache", self.blobs)
        self.docs = DocumentStore(data / "documents")
        providers = {"mock": MockProvider(self.blobs)}
        default = "mock"
        if provider_endpoint:
            provider = HttpProvider(endpoint=provider_endpoint, token=provider_token, blobs=self.blobs)
            providers[provider.provider_id] = provider
            default = provider.provider_id
        self.providers = ProviderRegistry(providers, default)

    @property
    def registry(self):
        return build_registry(self.blobs, self.docs)


def _emit(ctx: click.Context, payload: dict, human: str) -> None:
    if ctx.obj["json"]:
        click.echo(json.dumps(payload, sort_keys=True, indent=2))
    else:
        click.echo(human)


@click.group()
@click.option("--data-dir", default=None, help="State directory (default ./data).")
@click.option("--provider-endpoint", default=None, help="HTTP provider endpoint (default: mock provider).")
@click.option("--provider-token", default=None)
@click.option("--json", "json_out", is_flag=True, help="Machine-readable output.")
@click.pass_context
def cli(ctx, data_dir, provider_endpoint, provider_token, json_out):
    """Compose and run infomorph workflows from the command line."""
    import os

    data_dir = data_dir or os.environ.get("INFOMORPH_DATA_DIR", "data")
    provider_endpoint = provider_endpoint or os.environ.get("INFOMORPH_PROVIDER_ENDPOINT")
    provider_token = provider_token or os.environ.get("INFOMORPH_PROVIDER_TOKEN")
    ctx.obj = {
        "env": Env(data_dir, provider_endpoint, provider_token),
        "json": json_out,
    }


@cli.command()
@click.argument("source")
@click.option("--media-kind", default=None)
@click.option("--no-enrich", is_flag=True, help="Skip summaries/embeddings.")
@click.pass_context
def ingest(ctx, source, media_kind, no_enrich):
    """Ingest a file path or URL into the document store."""
    env: Env = ctx.obj["env"]
    ingestor = Ingestor(env.blobs, env.cache)
    if source.startswith(("http://", "https://")):
        doc = ingestor.ingest_url(source)
    else:
        doc = ingestor.ingest_file(source, media_kind)
    if not no_enrich:
        doc = ingestor.enrich(doc, env.providers.get())
    env.docs.save(doc)
    manifest = env.docs.manifest(doc.doc_id)
    _emit(ctx, manifest, f"{doc.doc_id}  {doc.media_kind}  {doc.page_count} pages  {doc.title}")


@cli.command()
@click.option("--chat", "chat_file", required=True, type=click.Path(exists=False), help="Conversation transcript file.")
@click.argument("doc_ids", nargs=-1)
@click.option("--out", default=None, type=click.Path(), help="Write triage JSON here.")
@click.pass_context
def triage(ctx, chat_file, doc_ids, out):
    """Label sources relevant/irrelevant from a conversation transcript."""
    env: Env = ctx.obj["env"]
    transcript = Path(chat_file).read_text(encoding="utf-8")
    ids = list(doc_ids) or env.docs.ids()
    docs = [env.docs.load(doc_id) for doc_id in ids]
    result = triage_sources(transcript, docs, env.providers.get())
    payload = result.to_jsonable()
    if out:
        Path(out).write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    lines = [f"{doc_id}  {entry['label']}  ({entry['rationale']})" for doc_id, entry in payload["sources"].items()]
    _emit(ctx, payload, "\n".join(lines))


@cli.command()
@click.option("--goal", required=True)
@click.option("--triage", "triage_file", default=None, type=click.Path(), help="Triage JSON from the triage command.")
@click.option("--docs", "doc_ids", multiple=True, help="Restrict to these doc ids.")
@click.option("--out", default=None, type=click.Path(), help="Write the workflow file here.")
@click.pass_context
def synthesize(ctx, goal, triage_file, doc_ids, out):
    """Synthesize a workflow graph from a goal and triaged sources."""
    env: Env = ctx.obj["env"]
    ids = list(doc_ids) or env.docs.ids()
    docs = [env.docs.load(doc_id) for doc_id in ids]
    if triage_file:
        triage_data = SourceTriage.from_jsonable(json.loads(Path(triage_file).read_text(encoding="utf-8")))
    else:
        triage_data = triage_sources([], docs, env.providers.get())
    graph = synthesize_workflow(goal, triage_data, docs)
    if out:
        save_workflow(graph, out)
    payload = graph.to_jsonable()
    _emit(ctx, payload, f"{len(graph.nodes)} nodes, {len(graph.edges)} edges" + (f" -> {out}" if out else ""))


@cli.command()
@click.argument("workflow_file", type=click.Path())
@click.option("--node", "target", default=None, help="Run only this node and its ancestors.")
@click.pass_context
def run(ctx, workflow_file, target):
    """Execute a workflow file; prints the execution report."""
    env: Env = ctx.obj["env"]
    graph = load_workflow(workflow_file)
    report = engine.execute(
        graph, env.registry, env.cache, env.providers, targets=[target] if target else None
    )
    save_workflow(graph, workflow_file)
    payload = report.to_jsonable()
    human = (
        f"evaluated={len(report.evaluated)} cache_hits={len(report.cache_hits)} "
        f"provider_calls={report.provider_calls} failures={len(report.failures)} blocked={len(report.blocked)}"
    )
    _emit(ctx, payload, human)
    if report.failures:
        for failure in report.failures:
            click.echo(f"failed: {failure['node']}: {failure['error']}", err=True)
        sys.exit(EXIT_VALIDATION)


@cli.command()
@click.argument("workflow_file", type=click.Path())
@click.argument("node_id")
@click.option("--revoke", is_flag=True, help="Unapprove instead of approving.")
@click.pass_context
def approve(ctx, workflow_file, node_id, revoke):
    """Freeze (or unfreeze) a node's output."""
    env: Env = ctx.obj["env"]
    graph = load_workflow(workflow_file)
    node = engine.set_approval(graph, node_id, not revoke, env.cache)
    save_workflow(graph, workflow_file)
    _emit(
        ctx,
        {"id": node.id, "approved": node.approved, "frozen_output": node.frozen_output},
        f"{node.id} approved={node.approved}",
    )


@cli.command()
@click.argument("workflow_file", type=click.Path())
@click.argument("node_id")
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.pass_context
def export(ctx, workflow_file, node_id, out_dir):
    """Materialize a builder node's artifact into a directory."""
    env: Env = ctx.obj["env"]
    graph = load_workflow(workflow_file)
    node = graph.node(node_id)
    if node.kind not in BUILDER_KINDS:
        raise click.UsageError(f"node {node_id} is a {node.kind.value}, not a builder")
    digest = engine.node_output_hash(graph, node_id, env.cache)
    if digest is None:
        producers = [graph.nodes[e.src] for e in graph.in_edges(node_id)]
        if not producers or any(
            p.state is not NodeState.CLEAN and not p.approved for p in producers
        ):
            click.echo("builder input is not Clean; execute the workflow first", err=True)
            sys.exit(EXIT_VALIDATION)
        engine.execute(graph, env.registry, env.cache, env.providers, targets=[node_id])
        save_workflow(graph, workflow_file)
        digest = engine.node_output_hash(graph, node_id, env.cache)
        if digest is None:
            click.echo(f"builder {node_id} failed: {node.error}", err=True)
            sys.exit(EXIT_VALIDATION)
    from infomorph.content.canonical import parse_content

    artifact = parse_content(env.blobs.get(digest))
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for rel, file_digest in artifact.files:
        target = out / rel
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_bytes(env.blobs.get(file_digest))
        written.append(str(target))
    manifest_path = out / "manifest.json"
    manifest_path.write_text(
        json.dumps(
            {"name": artifact.name, "manifest": artifact.manifest, "files": dict(artifact.files)},
            sort_keys=True,
            indent=2,
        )
        + "\n",
        encoding="utf-8",
    )
    written.append(str(manifest_path))
    _emit(ctx, {"hash": digest, "files": written}, "\n".join(written))


@cli.command()
@click.option("--config", "config_file", default=None, type=click.Path())
@click.option("--host", default=None)
@click.option("--port", default=None, type=int)
@click.pass_context
def serve(ctx, config_file, host, port):
    """Run the HTTP service for the canvas UI."""
    import uvicorn

    from infomorph.service.app import create_app

    config = load_config(config_file)
    if ctx.obj["env"].data_dir != Path("data"):
        config.data_dir = str(ctx.obj["env"].data_dir)
    if host:
        config.host = host
    if port:
        config.port = port
    uvicorn.run(create_app(config), host=config.host, port=config.port)


def main() -> None:
    try:
        cli(standalone_mode=False)
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        sys.exit(EXIT_USAGE)
    except click.ClickException as exc:
        exc.show()
        sys.exit(EXIT_USAGE)
    except click.exceptions.Abort:
        sys.exit(EXIT_USAGE)
    except _PROVIDER_ERRORS as exc:
        click.echo(f"provider error: {exc}", err=True)
        sys.exit(EXIT_PROVIDER)
    except _IO_ERRORS as exc:
        click.echo(f"io error: {exc}", err=True)
        sys.exit(EXIT_IO)
    except EngineError as exc:
        click.echo(f"error [{exc.code}]: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    except OSError as exc:
        click.echo(f"io error: {exc}", err=True)
        sys.exit(EXIT_IO)


if __name__ == "__main__":
    main()
