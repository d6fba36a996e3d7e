import json
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from campnet.ingest import load_snapshot
from campnet.service import create_app

GOLDEN = Path(__file__).parent / "golden"
SNAPSHOT = GOLDEN / "song_snapshot.json"
EIGHT_MASTERS_QUERY = {
    "seeds": [3767, 1762, 1384, 1460, 3768, 3769],
    "depth": 0,
    "algorithm": "community",
    "seed": 7,
}
SU_FAMILY = {"3767": 1, "3768": 1, "3769": 1}


@pytest.fixture(scope="module")
def client():
    app = create_app(load_snapshot(SNAPSHOT))
    with TestClient(app) as c:
        yield c


def golden(name: str) -> bytes:
    return (GOLDEN / name).read_bytes()


# -- golden contracts (one per endpoint) --------------------------------------------


def test_stats_golden(client):
    r = client.get("/api/stats")
    assert r.status_code == 200
    assert r.content == golden("api_stats.json")
    body = r.json()
    assert body["node_count"] == 7 and body["edge_count"] == 9
    assert sum(c for _, c in body["degree_histogram"]) == body["node_count"]


def test_persons_golden(client):
    r = client.get("/api/persons", params={"q": "wang"})
    assert r.status_code == 200
    assert r.content == golden("api_persons.json")
    assert r.json()["items"][0]["name_en"] == "Wang Anshi"


def test_centrality_golden(client):
    r = client.get("/api/centrality", params={"top": 15, "order_by": "degree"})
    assert r.status_code == 200
    assert r.content == golden("api_centrality.json")
    rows = r.json()["rows"]
    assert rows[0]["person_id"] == 1762  # Wang Anshi tops the Song fixture
    assert all(rows[i]["degree"] >= rows[i + 1]["degree"] for i in range(len(rows) - 1))


def test_subgraph_golden(client):
    r = client.get("/api/subgraph", params={"seeds": "3767,1762", "depth": 0})
    assert r.status_code == 200
    assert r.content == golden("api_subgraph.json")
    body = r.json()
    assert body["format"] == "campnet-snapshot"
    assert body["node_count"] == 2 and body["edge_count"] == 1
    assert body["ball_sizes"] == [2]


def test_partition_golden(client):
    r = client.post("/api/partition", json=EIGHT_MASTERS_QUERY)
    assert r.status_code == 200
    assert r.content == golden("api_partition.json")
    body = r.json()
    assert body["l"] == 2 and body["imbalance"] == 0.0
    assert {k: v for k, v in body["assignment"].items() if k in SU_FAMILY} == SU_FAMILY


def test_pair_golden(client):
    r = client.get("/api/pair", params={"u": 1762, "v": 1384})
    assert r.status_code == 200
    assert r.content == golden("api_pair.json")
    body = r.json()
    assert (body["pos_total"], body["neg_total"]) == (3, 1)
    assert body["net_sign"] == "positive"


def test_report_golden(client):
    r = client.post("/api/report", json=EIGHT_MASTERS_QUERY)
    assert r.status_code == 200
    assert r.content == golden("api_report.json")
    part = r.json()["partition"]
    groups = [set(g) for g in part["groups"]]
    assert {3767, 3768, 3769} in groups and {1762, 1384, 1460} in groups


def test_report_bytes_stable_across_instances(client):
    fresh = TestClient(create_app(load_snapshot(SNAPSHOT)))
    a = client.post("/api/report", json=EIGHT_MASTERS_QUERY).content
    b = fresh.post("/api/report", json=EIGHT_MASTERS_QUERY).content
    assert a == b


# -- error mapping ---------------------------------------------------------------


def test_unknown_person_is_404(client):
    r = client.get("/api/pair", params={"u": 1762, "v": 55555})
    assert r.status_code == 404
    assert r.json()["error"]["type"] == "unknown_id"
    r = client.get("/api/subgraph", params={"seeds": "1,2", "depth": 0})
    assert r.status_code == 404


def test_depth_cap_is_422(client):
    r = client.get("/api/subgraph", params={"seeds": "1762", "depth": 9})
    assert r.status_code == 422
    assert r.json()["error"]["type"] == "guard_violation"


def test_node_cap_is_422():
    capped = TestClient(create_app(load_snapshot(SNAPSHOT), node_cap=3))
    r = capped.get("/api/subgraph", params={"seeds": "1762", "depth": 1})
    assert r.status_code == 422
    assert "cap" in r.json()["error"]["message"]


def test_brute_force_size_guard_is_422():
    capped = TestClient(create_app(load_snapshot(SNAPSHOT)))
    r = capped.post("/api/partition", json={"algorithm": "brute",
                                            "seeds": [1762], "depth": 9})
    assert r.status_code == 422


def test_invalid_queries_are_400(client):
    assert client.get("/api/subgraph", params={"seeds": "", "depth": 0}).status_code == 400
    assert client.get("/api/subgraph", params={"seeds": "a,b", "depth": 0}).status_code == 400
    assert client.get("/api/pair", params={"u": "x", "v": 2}).status_code == 400
    assert client.get("/api/centrality", params={"order_by": "fame"}).status_code == 400
    assert client.post("/api/partition", json={"algorithm": "magic",
                                               "seeds": [1762]}).status_code == 400
    assert client.post("/api/report", json={"algorithm": "community"}).status_code == 400
    assert client.post("/api/partition",
                       json={"algorithm": "greedy", "seeds": [1762]}).status_code == 400
    r = client.post("/api/report", content=b"not json",
                    headers={"content-type": "application/json"})
    assert r.status_code == 400


def test_pair_is_symmetric(client):
    a = client.get("/api/pair", params={"u": 1762, "v": 1384}).json()
    b = client.get("/api/pair", params={"u": 1384, "v": 1762}).json()
    assert a == b


def test_persons_pagination(client):
    all_hits = client.get("/api/persons", params={"q": "", "limit": 3}).json()
    assert all_hits["total"] == 7 and len(all_hits["items"]) == 3
    page2 = client.get("/api/persons", params={"q": "", "limit": 3, "offset": 3}).json()
    assert [p["person_id"] for p in page2["items"]] != \
        [p["person_id"] for p in all_hits["items"]]


def test_person_search_exact_chinese(client):
    r = client.get("/api/persons", params={"q": "王安石"}).json()
    assert r["total"] == 1 and r["items"][0]["person_id"] == 1762


# -- concurrency -----------------------------------------------------------------


def test_concurrent_queries_equal_serialized(client):
    requests = []
    for i in range(16):
        kind = i % 4
        if kind == 0:
            requests.append(("GET", "/api/stats", None))
        elif kind == 1:
            requests.append(("POST", "/api/report",
                             dict(EIGHT_MASTERS_QUERY, seed=i)))
        elif kind == 2:
            requests.append(("GET", "/api/centrality", None))
        else:
            requests.append(("POST", "/api/partition",
                             dict(EIGHT_MASTERS_QUERY, algorithm="greedy",
                                  groups=2, seed=i)))

    def issue(req):
        method, url, body = req
        if method == "GET":
            return client.get(url).content
        return client.post(url, json=body).content

    serial = [issue(req) for req in requests]
    with ThreadPoolExecutor(max_workers=16) as pool:
        parallel = list(pool.map(issue, requests))
    assert parallel == serial
