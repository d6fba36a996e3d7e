#!/usr/bin/env python3
"""Regenerate the golden fixture snapshot and HTTP endpoint captures.

Run from the repository root after an intentional behavior change:

    python scripts/regen_golden.py

The semantic assertions in the test suite still apply; goldens only pin
byte-level stability on top of them.
"""

from __future__ import annotations

import sys
from pathlib import Path

from fastapi.testclient import TestClient

ROOT = Path(__file__).resolve().parent.parent
FIXTURE = ROOT / "tests" / "data" / "eight_masters"
GOLDEN = ROOT / "tests" / "golden"

sys.path.insert(0, str(ROOT / "src"))

from campnet.ingest import build_dataset, load_snapshot, parse_corpus, save_snapshot  # noqa: E402
from campnet.service import create_app  # noqa: E402

EIGHT_MASTERS_QUERY = {
    "seeds": [3767, 1762, 1384, 1460, 3768, 3769],
    "depth": 0,
    "algorithm": "community",
    "seed": 7,
}


def main() -> None:
    GOLDEN.mkdir(exist_ok=True)
    persons, relations, rules, _ = parse_corpus(
        FIXTURE / "persons.tsv", FIXTURE / "relations.tsv", FIXTURE / "sign_rules.tsv")
    dataset = build_dataset(persons, relations, rules, dynasty="Song")
    snapshot_path = GOLDEN / "song_snapshot.json"
    save_snapshot(dataset, snapshot_path)
    print(f"wrote {snapshot_path}")

    client = TestClient(create_app(load_snapshot(snapshot_path)))
    captures = {
        "api_stats.json": client.get("/api/stats"),
        "api_persons.json": client.get("/api/persons", params={"q": "wang"}),
        "api_centrality.json": client.get("/api/centrality",
                                          params={"top": 15, "order_by": "degree"}),
        "api_subgraph.json": client.get("/api/subgraph",
                                        params={"seeds": "3767,1762", "depth": 0}),
        "api_partition.json": client.post("/api/partition", json=EIGHT_MASTERS_QUERY),
        "api_pair.json": client.get("/api/pair", params={"u": 1762, "v": 1384}),
        "api_report.json": client.post("/api/report", json=EIGHT_MASTERS_QUERY),
    }
    for name, response in captures.items():
        assert response.status_code == 200, (name, response.status_code, response.text)
        (GOLDEN / name).write_bytes(response.content)
        print(f"wrote {GOLDEN / name} ({len(response.content)} bytes)")


if __name__ == "__main__":
    main()
