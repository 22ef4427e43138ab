"""HTTP service: a thin bijection over the engine operations.

Every 4xx maps 1:1 to a documented engine error code; no endpoint mutates
state on a validation failure. Execution status streams as server-sent
events (one ``node`` event per state change, a final ``done`` event with the
report). See docs/api.md for the endpoint reference.
"""

from __future__ import annotations

import json
import threading

from fastapi import FastAPI, Request, UploadFile
from fastapi.responses import JSONResponse, Response, StreamingResponse

from infomorph.content.canonical import canonicalize, parse_content, sha256_hex
from infomorph.content.model import SlideDeckPlan
from infomorph.content.patch import apply_patch
from infomorph.errors import EngineError, UnknownId, ValidationError
from infomorph.graph import engine
from infomorph.graph.kinds import NodeKind
from infomorph.graph.model import WorkflowGraph
from infomorph.ingest.ingestion import scoped_chat
from infomorph.ops.images import image_op, slot_patch_op
from infomorph.ops.synthesize import synthesize_workflow
from infomorph.ops.triage import SourceTriage, triage_sources
from infomorph.service.config import ServiceConfig
from infomorph.service.state import AppState, ExecutionBusy, ExecutionRecord, build_state


def _error_response(exc: EngineError) -> JSONResponse:
    body = {"error": {"code": exc.code, "message": str(exc)}}
    if getattr(exc, "path", None):
        body["error"]["path"] = exc.path
    return JSONResponse(status_code=exc.http_status, content=body)


def _node_view(node) -> dict:
    return {"id": node.id, **node.to_jsonable()}


def create_app(config: ServiceConfig | None = None, state: AppState | None = None) -> FastAPI:
    app = FastAPI(title="infomorph service", version="0.1.0")
    st = state if state is not None else build_state(config or ServiceConfig())
    app.state.engine = st

    @app.exception_handler(EngineError)
    async def _handle_engine_error(request: Request, exc: EngineError):
        return _error_response(exc)

    # -- workflows -----------------------------------------------------------

    @app.post("/workflows")
    async def create_workflow(request: Request):
        body = await _json_body(request, default={})
        with st.mutate_lock:
            workflow_id = st.new_id("wf")
            if body.get("workflow"):
                graph = WorkflowGraph.from_jsonable(body["workflow"])
                graph.validate()
            else:
                graph = WorkflowGraph(title=body.get("title", ""))
            if graph.created_at is None:
                from datetime import datetime, timezone

                graph.created_at = datetime.now(timezone.utc).isoformat(timespec="seconds")
            st.workflows[workflow_id] = graph
            st.persist(workflow_id)
        return {"id": workflow_id, "workflow": graph.to_jsonable()}

    @app.get("/workflows/{workflow_id}")
    async def get_workflow(workflow_id: str):
        return {"id": workflow_id, "workflow": st.workflow(workflow_id).to_jsonable()}

    @app.put("/workflows/{workflow_id}")
    async def put_workflow(workflow_id: str, request: Request):
        body = await _json_body(request)
        graph = WorkflowGraph.from_jsonable(body.get("workflow", body))
        graph.validate()
        with st.mutate_lock:
            st.workflow(workflow_id)  # 404 before replacing
            st.workflows[workflow_id] = graph
            st.persist(workflow_id)
        return {"id": workflow_id, "workflow": graph.to_jsonable()}

    @app.post("/workflows/{workflow_id}/nodes")
    async def add_node(workflow_id: str, request: Request):
        body = await _json_body(request)
        try:
            kind = NodeKind(body.get("kind", ""))
        except ValueError:
            raise ValidationError(f"unknown node kind {body.get('kind')!r}", path="$.kind") from None
        with st.mutate_lock:
            graph = st.workflow(workflow_id)
            # server-minted ids are globally unique so the unscoped /nodes/{id}
            # routes stay unambiguous across workflows
            node = graph.add_node(kind, config=body.get("config", {}), node_id=body.get("id") or st.new_id("n"))
            st.persist(workflow_id)
        return {"workflow_id": workflow_id, "node": _node_view(node)}

    @app.put("/nodes/{node_id}/config")
    async def put_node_config(node_id: str, request: Request):
        body = await _json_body(request)
        with st.mutate_lock:
            workflow_id, graph = st.find_node(node_id)
            node = engine.set_config(graph, node_id, body.get("config", {}))
            st.persist(workflow_id)
        return {"workflow_id": workflow_id, "node": _node_view(node)}

    @app.post("/edges")
    async def post_edge(request: Request):
        body = await _json_body(request)
        workflow_id = body.get("workflow_id", "")
        with st.mutate_lock:
            graph = st.workflow(workflow_id)
            edge_id = engine.connect(
                graph, body.get("from", ""), body.get("to", ""), int(body.get("port", 0)), edge_id=st.new_id("e")
            )
            st.persist(workflow_id)
        return {"workflow_id": workflow_id, "edge_id": edge_id, "edge": graph.edges[edge_id].to_jsonable()}

    @app.delete("/edges/{edge_id}")
    async def delete_edge(edge_id: str):
        with st.mutate_lock:
            workflow_id, graph = st.find_edge(edge_id)
            engine.disconnect(graph, edge_id)
            st.persist(workflow_id)
        return Response(status_code=204)

    # -- execution ---------------------------------------------------------------

    def _run_execution(workflow_id: str, record: ExecutionRecord, targets: list[str] | None) -> None:
        graph = st.workflow(workflow_id)

        def on_event(node_id: str, event: str, detail: dict) -> None:
            record.emit({"node": node_id, "state": event, **detail})

        try:
            report = engine.execute(
                graph, st.registry, st.cache, st.providers, targets=targets, on_event=on_event
            )
            st.persist(workflow_id)
            record.finish(report.to_jsonable())
        except EngineError as exc:
            record.finish({"error": {"code": exc.code, "message": str(exc)}})

    @app.post("/workflows/{workflow_id}/execute")
    async def execute_workflow(workflow_id: str, request: Request, wait: bool = True):
        body = await _json_body(request, default={})
        targets = body.get("targets")
        st.workflow(workflow_id)
        lock = st.execution_lock(workflow_id)
        if not lock.acquire(blocking=False):
            raise ExecutionBusy(f"an execution is already running for workflow {workflow_id}")
        record = ExecutionRecord(st.new_id("x"), workflow_id)
        st.executions[record.id] = record

        def runner():
            try:
                _run_execution(workflow_id, record, targets)
            finally:
                lock.release()

        thread = threading.Thread(target=runner, daemon=True)
        thread.start()
        if wait:
            thread.join()
            return {"execution_id": record.id, "report": record.report}
        return JSONResponse(status_code=202, content={"execution_id": record.id})

    @app.get("/executions/{execution_id}")
    async def get_execution(execution_id: str):
        record = st.executions.get(execution_id)
        if record is None:
            raise UnknownId(f"no execution {execution_id!r}")
        return {"execution_id": record.id, "workflow_id": record.workflow_id, "done": record.done, "report": record.report}

    @app.get("/executions/{execution_id}/events")
    async def execution_events(execution_id: str):
        record = st.executions.get(execution_id)
        if record is None:
            raise UnknownId(f"no execution {execution_id!r}")

        def stream():
            for event in record.follow():
                yield f"event: node\ndata: {json.dumps(event, sort_keys=True)}\n\n"
            payload = json.dumps(record.report or {}, sort_keys=True)
            yield f"event: done\ndata: {payload}\n\n"

        return StreamingResponse(
            stream(),
            media_type="text/event-stream",
            headers={"cache-control": "no-cache", "x-accel-buffering": "no"},
        )

    # -- node state ---------------------------------------------------------------

    @app.post("/nodes/{node_id}/approve")
    async def approve_node(node_id: str, request: Request):
        body = await _json_body(request, default={})
        approved = bool(body.get("approved", True))
        with st.mutate_lock:
            workflow_id, graph = st.find_node(node_id)
            node = engine.set_approval(graph, node_id, approved, st.cache)
            st.persist(workflow_id)
        return {"workflow_id": workflow_id, "node": _node_view(node)}

    def _current_output(graph, node_id: str):
        digest = engine.node_output_hash(graph, node_id, st.cache)
        if digest is None:
            return None, None
        return digest, parse_content(st.blobs.get(digest))

    def _patch_base(graph, node):
        """What the UI is currently showing for a viewer node: the producer's
        output with the stored (possibly not-yet-executed) patch applied.
        Falls back to the node's own last computed output."""
        edges = graph.in_edges(node.id)
        if edges:
            producer_digest = engine.node_output_hash(graph, edges[0].src, st.cache)
            if producer_digest is not None:
                base = parse_content(st.blobs.get(producer_digest))
                return apply_patch(base, node.config.get("patch", []))
        digest = st.cache.get(node.last_fingerprint) if node.last_fingerprint else None
        if digest is not None:
            return parse_content(st.blobs.get(digest))
        return None

    @app.post("/nodes/{node_id}/patch")
    async def patch_node(node_id: str, request: Request):
        body = await _json_body(request)
        ops = body.get("ops", [])
        if not isinstance(ops, list):
            raise ValidationError("ops must be a list of patch operations", path="$.ops")
        with st.mutate_lock:
            workflow_id, graph = st.find_node(node_id)
            node = graph.node(node_id)
            if node.approved:
                from infomorph.errors import ApprovedLocked

                raise ApprovedLocked(f"node {node_id} is approved; unapprove before editing")
            current = _patch_base(graph, node)
            if current is None:
                from infomorph.errors import NotClean

                raise NotClean(f"node {node_id} has no computed output to patch")
            preview = apply_patch(current, ops)  # validates ops against the live view
            config = dict(node.config)
            config["patch"] = list(config.get("patch", [])) + list(ops)
            engine.set_config(graph, node_id, config)
            st.persist(workflow_id)
        return {
            "workflow_id": workflow_id,
            "node": _node_view(graph.node(node_id)),
            "preview": {"kind": preview.KIND, "body": preview.to_jsonable()},
        }

    @app.post("/nodes/{node_id}/image-op")
    async def node_image_op(node_id: str, request: Request):
        body = await _json_body(request)
        op = body.get("op", "")
        address = {"slide": body.get("slide"), "slot_id": body.get("slot_id")}
        prompt = body.get("prompt", "")
        with st.mutate_lock:
            workflow_id, graph = st.find_node(node_id)
            node = graph.node(node_id)
            if node.approved:
                from infomorph.errors import ApprovedLocked

                raise ApprovedLocked(f"node {node_id} is approved; unapprove before editing")
            current = _patch_base(graph, node)
            if current is None or not isinstance(current, SlideDeckPlan):
                from infomorph.errors import NotClean

                raise NotClean(f"node {node_id} has no slide deck output to edit")
            provider = st.providers.for_config(node.config)
            model = node.config.get("model", "default")
            updated = image_op(op, address, prompt, current, provider, model=model)
            slide = updated.slides[address["slide"]]
            new_state = next(s.state for s in slide.image_slots if s.slot_id == address["slot_id"])
            config = dict(node.config)
            config["patch"] = list(config.get("patch", [])) + [slot_patch_op(address, new_state)]
            engine.set_config(graph, node_id, config)
            st.persist(workflow_id)
        return {
            "workflow_id": workflow_id,
            "node": _node_view(graph.node(node_id)),
            "hash": new_state.get("hash"),
            "preview": {"kind": updated.KIND, "body": updated.to_jsonable()},
        }

    @app.get("/nodes/{node_id}/output")
    async def node_output(node_id: str):
        _, graph = st.find_node(node_id)
        digest, content = _current_output(graph, node_id)
        if content is None:
            raise UnknownId(f"node {node_id} has no output yet")
        return {"hash": digest, "kind": content.KIND, "body": content.to_jsonable()}

    # -- documents -------------------------------------------------------------------

    @app.post("/documents")
    async def post_document(request: Request, file: UploadFile | None = None, enrich: bool = True):
        ingestor = st.ingestor
        if file is not None:
            data = await file.read()
            import tempfile

            from infomorph.ingest.adapters import detect_media_kind

            media_kind = detect_media_kind(file.filename or "")
            with tempfile.NamedTemporaryFile(suffix=f"-{file.filename}", delete=False) as handle:
                handle.write(data)
                tmp_path = handle.name
            try:
                doc = ingestor.ingest_file(tmp_path, media_kind)
            finally:
                import os

                os.unlink(tmp_path)
            doc = _reoriginate(doc, file.filename or doc.origin)
        else:
            body = await _json_body(request)
            url = body.get("url", "")
            if not url:
                raise ValidationError("provide a multipart file or {\"url\": …}", path="$.url")
            doc = ingestor.ingest_url(url)
        if enrich:
            doc = ingestor.enrich(doc, st.providers.get())
        st.docs.save(doc)
        return st.docs.manifest(doc.doc_id)

    @app.get("/documents")
    async def list_documents():
        return {"documents": [st.docs.manifest(doc_id) for doc_id in st.docs.ids()]}

    @app.get("/documents/{doc_id}")
    async def get_document(doc_id: str):
        doc = st.docs.load(doc_id)
        manifest = st.docs.manifest(doc_id)
        manifest["summary"] = doc.summary
        manifest["pages"] = [
            {"index": p.index, "summary": p.summary, "image_refs": list(p.image_refs)} for p in doc.pages
        ]
        return manifest

    @app.get("/documents/{doc_id}/pages/{index}")
    async def get_page(doc_id: str, index: int):
        doc = st.docs.load(doc_id)
        page = doc.page(index)
        return {
            "doc_id": doc_id,
            "index": page.index,
            "text": page.text,
            "summary": page.summary,
            "image_refs": list(page.image_refs),
        }

    @app.post("/documents/{doc_id}/chat")
    async def chat(doc_id: str, request: Request):
        body = await _json_body(request)
        doc = st.docs.load(doc_id)
        return scoped_chat(doc, body.get("question", ""), st.providers.get(), history=body.get("history"))

    # -- triage and synthesis -----------------------------------------------------------

    @app.post("/triage")
    async def post_triage(request: Request):
        body = await _json_body(request)
        doc_ids = body.get("doc_ids") or st.docs.ids()
        docs = [st.docs.load(doc_id) for doc_id in doc_ids]
        triage = triage_sources(body.get("conversation", []), docs, st.providers.get())
        for doc_id, label in (body.get("overrides") or {}).items():
            triage.set_override(doc_id, label)
        return triage.to_jsonable()

    @app.post("/synthesize")
    async def post_synthesize(request: Request):
        body = await _json_body(request)
        goal = body.get("goal", "")
        if not goal:
            raise ValidationError("synthesize needs a goal", path="$.goal")
        doc_ids = body.get("doc_ids") or st.docs.ids()
        docs = [st.docs.load(doc_id) for doc_id in doc_ids]
        if body.get("triage"):
            triage = SourceTriage.from_jsonable(body["triage"])
        else:
            triage = triage_sources([], docs, st.providers.get())
        graph = synthesize_workflow(goal, triage, docs)
        with st.mutate_lock:
            workflow_id = st.new_id("wf")
            from datetime import datetime, timezone

            graph.created_at = datetime.now(timezone.utc).isoformat(timespec="seconds")
            st.workflows[workflow_id] = graph
            st.persist(workflow_id)
        return {"workflow_id": workflow_id, "workflow": graph.to_jsonable()}

    # -- artifacts -----------------------------------------------------------------------

    @app.get("/artifacts/{digest}")
    async def get_artifact(digest: str):
        data = st.blobs.get(digest)
        media = "image/png" if data[:8] == b"\x89PNG\r\n\x1a\n" else "application/octet-stream"
        return Response(content=data, media_type=media)

    return app


def _reoriginate(doc, origin: str):
    from dataclasses import replace

    return replace(doc, origin=origin)


async def _json_body(request: Request, default: dict | None = None) -> dict:
    raw = await request.body()
    if not raw:
        if default is not None:
            return default
        raise ValidationError("request body must be JSON", path="$")
    try:
        body = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"request body is not valid JSON: {exc}", path="$") from exc
    if not isinstance(body, dict):
        raise ValidationError("request body must be a JSON object", path="$")
    return body
