#!/usr/bin/env python3
"""Record API + SSE fixtures for the frontend test suite.

Drives the real service end-to-end (ingest, build a workflow, execute twice,
patch) and captures the exact payloads the canvas consumes:
frontend/test/fixtures/{workflow_before,workflow_after,events_first,
events_cached,table_output,document_page}.json
"""

from __future__ import annotations

import json
import sys
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

from infomorph.service.app import create_app  # noqa: E402
from infomorph.service.config import ServiceConfig  # noqa: E402
from infomorph.service.state import build_state  # noqa: E402

OUT = ROOT / "frontend" / "test" / "fixtures"

CONTENT = (
    "Flight to Busan costs $620 round trip. Baggage fees add $40. Known expenses listed."
    "\fHistorical sites and seafood dining for families. Harbor activities in October."
    "\fHotel accommodation costs $130 per night. Registration fee is $450."
)


def read_events(client: TestClient, execution_id: str) -> list[dict]:
    events = []
    with client.stream("GET", f"/executions/{execution_id}/events") as response:
        current = None
        for line in response.iter_lines():
            if line.startswith("event: "):
                current = line[len("event: "):]
            elif line.startswith("data: "):
                events.append({"event": current, "data": json.loads(line[len("data: "):])})
    return events


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        state = build_state(ServiceConfig(data_dir=f"{tmp}/data"))
        client = TestClient(create_app(state=state), raise_server_exceptions=False)

        doc = client.post("/documents", files={"file": ("notes.txt", CONTENT.encode(), "text/plain")}).json()
        wf_id = client.post("/workflows", json={"title": "recorded"}).json()["id"]
        nodes = {}
        for key, kind, config in [
            ("src", "FileSource", {"doc_id": doc["doc_id"], "content_hash": doc["hash"]}),
            ("ext", "RelevantPageExtractor", {"extraction_prompt": "Extract known expenses with costs and fees.", "mode": "exhaustive"}),
            ("plan", "SpreadsheetPlanner", {"planning_prompt": "Create a budget. Limit it to three columns: Item, Estimated Cost (USD), and Notes."}),
            ("view", "SpreadsheetViewer", {}),
        ]:
            nodes[key] = client.post(f"/workflows/{wf_id}/nodes", json={"kind": kind, "config": config, "id": f"fix-{key}"}).json()["node"]["id"]
        for src, dst in [("src", "ext"), ("ext", "plan"), ("plan", "view")]:
            client.post("/edges", json={"workflow_id": wf_id, "from": nodes[src], "to": nodes[dst], "port": 0})

        before = client.get(f"/workflows/{wf_id}").json()
        first = client.post(f"/workflows/{wf_id}/execute", json={}).json()
        events_first = read_events(client, first["execution_id"])
        after = client.get(f"/workflows/{wf_id}").json()
        cached = client.post(f"/workflows/{wf_id}/execute", json={}).json()
        events_cached = read_events(client, cached["execution_id"])
        table = client.get(f"/nodes/{nodes['view']}/output").json()
        page = client.get(f"/documents/{doc['doc_id']}/pages/2").json()
        document = client.get(f"/documents/{doc['doc_id']}").json()
        patch = client.post(
            f"/nodes/{nodes['view']}/patch",
            json={"ops": [{"op": "set_cell", "row": 0, "col": 0, "value": "Edited"}]},
        ).json()

        fixtures = {
            "workflow_before.json": before,
            "workflow_after.json": after,
            "events_first.json": events_first,
            "events_cached.json": events_cached,
            "table_output.json": table,
            "document.json": document,
            "document_page.json": page,
            "patch_response.json": patch,
        }
        for name, payload in fixtures.items():
            (OUT / name).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
            print(f"wrote frontend/test/fixtures/{name}")


if __name__ == "__main__":
    main()
