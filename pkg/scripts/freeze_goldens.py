#!/usr/bin/env python3
"""Regenerate fixtures/busan/goldens.json from the scenario driver.

Run after changing fixture content or any documented mock rule; the
acceptance suite asserts byte-for-byte against the frozen values.
"""

from __future__ import annotations

import json
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

from scenario_driver import run_scenario  # noqa: E402


def main() -> None:
    fixtures = ROOT / "fixtures" / "busan"
    with tempfile.TemporaryDirectory() as tmp:
        out = run_scenario(Path(tmp), fixtures)
        artifact = out["artifact"]
        goldens = {
            "doc_ids": out["doc_ids"],
            "triage": {
                name: out["triage"].entries[doc_id].label
                for name, doc_id in out["doc_ids"].items()
            },
            "hashes": out["hashes"],
            "table_columns": [c.name for c in out["table"].columns],
            "table_rows": len(out["table"].rows),
            "itinerary_headings": [s.heading for s in out["itinerary"].sections],
            "csv_blob": artifact.file_map()["table.csv"],
            "xlsx_blob": artifact.file_map()["table.xlsx"],
        }
    target = fixtures / "goldens.json"
    target.write_text(json.dumps(goldens, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {target}")


if __name__ == "__main__":
    main()
