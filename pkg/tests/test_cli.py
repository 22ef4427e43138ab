from __future__ import annotations

import json
import subprocess
import sys

import pytest

CLI = [sys.executable, "-m", "infomorph.cli"]


def run_cli(args, data_dir, **kwargs):
    return subprocess.run(
        CLI + ["--data-dir", str(data_dir)] + args,
        capture_output=True,
        text=True,
        timeout=60,
        **kwargs,
    )


@pytest.fixture
def data_dir(tmp_path):
    return tmp_path / "data"


@pytest.fixture
def fixture_file(tmp_path):
    path = tmp_path / "notes.txt"
    path.write_text(
        "Flight to Busan costs $620 round trip. Baggage fees add $40. Known expenses listed."
        "\fHistorical sites and seafood dining for families. Harbor activities in October."
        "\fHotel accommodation costs $130 per night. Registration fee is $450.",
        encoding="utf-8",
    )
    return path


@pytest.fixture
def chat_file(tmp_path):
    path = tmp_path / "chat.txt"
    path.write_text(
        "user: I am planning a Busan conference trip. I need a budget estimate and itinerary ideas.\n"
        "assistant: Any interests or constraints?\n"
        "user: Historical sites, seafood dining, and family activities in early October. Avoid strenuous hiking.\n",
        encoding="utf-8",
    )
    return path


def test_ingest_json_manifest(data_dir, fixture_file):
    result = run_cli(["--json", "ingest", str(fixture_file)], data_dir)
    assert result.returncode == 0, result.stderr
    manifest = json.loads(result.stdout)
    assert manifest["media_kind"] == "text"
    assert manifest["page_count"] == 3
    assert manifest["enriched"] is True


def test_ingest_missing_file_exit_4(data_dir):
    result = run_cli(["ingest", "missing.pdf"], data_dir)
    assert result.returncode == 4
    assert "io error" in result.stderr


def test_usage_error_exit_1(data_dir):
    result = run_cli(["synthesize"], data_dir)  # --goal is required
    assert result.returncode == 1


def full_flow(data_dir, fixture_file, chat_file, tmp_path):
    ingest = run_cli(["--json", "ingest", str(fixture_file)], data_dir)
    doc_id = json.loads(ingest.stdout)["doc_id"]
    triage_out = tmp_path / "triage.json"
    triage = run_cli(["--json", "triage", "--chat", str(chat_file), "--out", str(triage_out), doc_id], data_dir)
    assert triage.returncode == 0, triage.stderr
    wf_path = tmp_path / "wf.json"
    synth = run_cli(
        ["--json", "synthesize", "--goal", "budget estimate and itinerary ideas",
         "--triage", str(triage_out), "--out", str(wf_path)],
        data_dir,
    )
    assert synth.returncode == 0, synth.stderr
    return doc_id, wf_path


def test_full_cli_flow_run_twice_zero_provider_calls(data_dir, fixture_file, chat_file, tmp_path):
    doc_id, wf_path = full_flow(data_dir, fixture_file, chat_file, tmp_path)
    workflow = json.loads(wf_path.read_text())
    kinds = [n["kind"] for n in workflow["nodes"].values()]
    assert "SpreadsheetPlanner" in kinds and "DocumentPlanner" in kinds

    first = run_cli(["--json", "run", str(wf_path)], data_dir)
    assert first.returncode == 0, first.stderr
    report1 = json.loads(first.stdout)
    assert report1["provider_calls"] > 0
    assert report1["failures"] == []

    second = run_cli(["--json", "run", str(wf_path)], data_dir)
    report2 = json.loads(second.stdout)
    assert report2["provider_calls"] == 0
    assert report2["evaluated"] == []


def test_approve_then_upstream_edit_keeps_frozen(data_dir, fixture_file, chat_file, tmp_path):
    _, wf_path = full_flow(data_dir, fixture_file, chat_file, tmp_path)
    run_cli(["run", str(wf_path)], data_dir)
    result = run_cli(["--json", "approve", str(wf_path), "view-table"], data_dir)
    assert result.returncode == 0, result.stderr
    assert json.loads(result.stdout)["approved"] is True
    revoked = run_cli(["--json", "approve", str(wf_path), "view-table", "--revoke"], data_dir)
    assert json.loads(revoked.stdout)["approved"] is False


def test_approve_pending_node_exit_2(data_dir, fixture_file, chat_file, tmp_path):
    _, wf_path = full_flow(data_dir, fixture_file, chat_file, tmp_path)
    result = run_cli(["approve", str(wf_path), "view-table"], data_dir)
    assert result.returncode == 2
    assert "not-clean" in result.stderr


def test_export_before_execute_exit_2(data_dir, fixture_file, chat_file, tmp_path):
    _, wf_path = full_flow(data_dir, fixture_file, chat_file, tmp_path)
    # attach a builder to the table viewer
    workflow = json.loads(wf_path.read_text())
    workflow["nodes"]["build-table"] = {
        "kind": "SpreadsheetBuilder",
        "config": {"xlsx": True},
        "state": "pending",
        "error": None,
        "approved": False,
        "frozen_output": None,
        "last_fingerprint": None,
    }
    workflow["edges"].append({"id": "e999", "from": "view-table", "to": "build-table", "port": 0})
    wf_path.write_text(json.dumps(workflow))

    out_dir = tmp_path / "exported"
    result = run_cli(["export", str(wf_path), "build-table", "--out", str(out_dir)], data_dir)
    assert result.returncode == 2
    assert "not Clean" in result.stderr

    run_cli(["run", str(wf_path)], data_dir)
    result = run_cli(["--json", "export", str(wf_path), "build-table", "--out", str(out_dir)], data_dir)
    assert result.returncode == 0, result.stderr
    assert (out_dir / "table.csv").exists()
    assert (out_dir / "table.xlsx").exists()
    manifest = json.loads((out_dir / "manifest.json").read_text())
    assert manifest["manifest"]["columns"] == ["Item", "Estimated Cost (USD)", "Notes"]


def test_export_non_builder_usage_error(data_dir, fixture_file, chat_file, tmp_path):
    _, wf_path = full_flow(data_dir, fixture_file, chat_file, tmp_path)
    result = run_cli(["export", str(wf_path), "view-table", "--out", str(tmp_path / "x")], data_dir)
    assert result.returncode == 1


def test_run_invalid_workflow_exit_2(data_dir, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"schema_version": 999}')
    result = run_cli(["run", str(bad)], data_dir)
    assert result.returncode == 2


def test_triage_provider_failure_exit_3(data_dir, fixture_file, chat_file, tmp_path):
    run_cli(["ingest", str(fixture_file)], data_dir)
    result = run_cli(
        ["--provider-endpoint", "http://127.0.0.1:9", "triage", "--chat", str(chat_file)],
        data_dir,
    )
    assert result.returncode == 3
    assert "provider error" in result.stderr


def test_serve_boots_and_answers(data_dir, fixture_file, tmp_path):
    import socket
    import time

    import httpx

    with socket.socket() as probe:
        probe.bind(("127.0.0.1", 0))
        port = probe.getsockname()[1]
    run_cli(["ingest", str(fixture_file)], data_dir)
    proc = subprocess.Popen(
        CLI + ["--data-dir", str(data_dir), "serve", "--port", str(port)],
        stdout=subprocess.DEVNULL,
        stderr=subprocess.DEVNULL,
    )
    try:
        deadline = time.monotonic() + 15
        last_error = None
        while time.monotonic() < deadline:
            try:
                response = httpx.get(f"http://127.0.0.1:{port}/documents", timeout=1.0)
                assert response.status_code == 200
                assert len(response.json()["documents"]) == 1
                break
            except (httpx.HTTPError, AssertionError) as exc:
                last_error = exc
                time.sleep(0.2)
        else:
            raise AssertionError(f"service never came up: {last_error}")
    finally:
        proc.terminate()
        proc.wait(timeout=10)
