"""Read-only HTTP service over one loaded graph snapshot.

The snapshot is loaded once at startup and shared by all requests; analysis
endpoints run on a bounded worker pool with a per-request subgraph node cap
so a careless query cannot take the service down. Responses are rendered
with a fixed JSON encoding (stable key order, sorted arrays) so identical
queries return byte-identical bodies.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Mapping, Optional, Sequence

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware

from . import centrality as centrality_mod
from .graph import UnknownNodeError
from .ingest import Dataset, dataset_to_dict, load_snapshot
from .partition import Algorithm, PartitionError, PartitionRequest, SizeGuardError
from .report import (
    centrality_row_dict,
    fmt,
    pair_relationship,
    pair_to_dict,
    partition_to_dict,
    report_to_dict,
    three_part_report,
)
from .stats import degree_histogram, network_summary, sign_counts
from .subgraph import DEFAULT_DEPTH_CAP, DepthCapError, SeedQuery, ball_nodes, ball_sizes

log = logging.getLogger(__name__)

DEFAULT_NODE_CAP = 2000


class BadQuery(Exception):
    """Malformed request parameters (HTTP 400)."""


class NodeCapExceeded(Exception):
    """The requested subgraph is larger than the configured cap (HTTP 422)."""

    def __init__(self, size: int, cap: int):
        self.size = size
        self.cap = cap
        super().__init__(f"subgraph has {size} nodes, exceeding the cap of {cap}; "
                         f"narrow the seeds or lower the depth")


def json_response(payload, status_code: int = 200) -> Response:
    body = json.dumps(payload, ensure_ascii=False, allow_nan=False,
                      separators=(",", ":"))
    return Response(content=body, status_code=status_code,
                    media_type="application/json")


def error_response(status_code: int, kind: str, message: str) -> Response:
    return json_response({"error": {"type": kind, "message": message}}, status_code)


def _parse_int(value, name: str, default=None, minimum: Optional[int] = None):
    if value is None:
        if default is None:
            raise BadQuery(f"missing required parameter {name!r}")
        return default
    try:
        out = int(value)
    except (TypeError, ValueError):
        raise BadQuery(f"parameter {name!r} must be an integer, got {value!r}") from None
    if minimum is not None and out < minimum:
        raise BadQuery(f"parameter {name!r} must be >= {minimum}, got {out}")
    return out


def _parse_float(value, name: str, default: float) -> float:
    if value is None:
        return default
    try:
        return float(value)
    except (TypeError, ValueError):
        raise BadQuery(f"parameter {name!r} must be a number, got {value!r}") from None


def _parse_seeds(value, name: str = "seeds") -> tuple:
    if value is None:
        raise BadQuery(f"missing required parameter {name!r}")
    if isinstance(value, str):
        parts = [p for p in value.split(",") if p.strip()]
    elif isinstance(value, Sequence):
        parts = list(value)
    else:
        raise BadQuery(f"parameter {name!r} must be a list or comma-separated string")
    if not parts:
        raise BadQuery(f"parameter {name!r} must name at least one person")
    try:
        return tuple(int(p) for p in parts)
    except (TypeError, ValueError):
        raise BadQuery(f"parameter {name!r} must contain integers, got {value!r}") from None


def _parse_partition_request(params: Mapping) -> PartitionRequest:
    raw_algo = params.get("algorithm")
    if raw_algo is None:
        raise BadQuery("missing required parameter 'algorithm'")
    try:
        algorithm = Algorithm(str(raw_algo))
    except ValueError:
        valid = ", ".join(a.value for a in Algorithm)
        raise BadQuery(f"unknown algorithm {raw_algo!r}; expected one of: {valid}") from None
    groups = params.get("groups")
    return PartitionRequest(
        algorithm=algorithm,
        seed=_parse_int(params.get("seed"), "seed", default=0),
        groups=None if groups is None else _parse_int(groups, "groups", minimum=1),
        restarts=_parse_int(params.get("restarts"), "restarts", default=16, minimum=1),
        gamma_pos=_parse_float(params.get("gamma_pos"), "gamma_pos", 1.0),
        gamma_neg=_parse_float(params.get("gamma_neg"), "gamma_neg", 1.0),
        dim=_parse_int(params.get("dim"), "dim", default=8, minimum=1),
    )


def create_app(dataset: Dataset, node_cap: int = DEFAULT_NODE_CAP,
               workers: int = 4, max_depth: int = DEFAULT_DEPTH_CAP) -> FastAPI:
    """Build the service over an already-loaded dataset."""
    app = FastAPI(title="campnet", docs_url=None, redoc_url=None)
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])
    app.state.dataset = dataset
    app.state.pool = ThreadPoolExecutor(max_workers=workers,
                                        thread_name_prefix="campnet-job")
    app.state.cache: Dict[str, object] = {}

    def guarded_ball(seeds: tuple, depth: int) -> set:
        query = SeedQuery(seeds, depth)
        ball = ball_nodes(dataset.graph, query, max_depth)
        if len(ball) > node_cap:
            raise NodeCapExceeded(len(ball), node_cap)
        return ball

    def run(fn, *args):
        return app.state.pool.submit(fn, *args).result()

    status_map = [
        (UnknownNodeError, 404, "unknown_id"),
        (DepthCapError, 422, "guard_violation"),
        (NodeCapExceeded, 422, "guard_violation"),
        (SizeGuardError, 422, "guard_violation"),
        (BadQuery, 400, "invalid_query"),
        (PartitionError, 400, "invalid_query"),
        (ValueError, 400, "invalid_query"),
    ]
    for exc_class, status, kind in status_map:
        def _handler(request: Request, exc: Exception,
                     status: int = status, kind: str = kind) -> Response:
            return error_response(status, kind, str(exc))

        app.add_exception_handler(exc_class, _handler)

    @app.exception_handler(RequestValidationError)
    async def handle_validation(request: Request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        where = ".".join(str(part) for part in first.get("loc", ()))
        return error_response(400, "invalid_query",
                              f"{where}: {first.get('msg', 'invalid parameter')}")

    @app.exception_handler(Exception)
    async def handle_unexpected(request: Request, exc: Exception):
        log.exception("unhandled error on %s", request.url)
        return error_response(500, "internal_error", "internal server error")

    @app.get("/api/stats")
    def stats() -> Response:
        if "stats" not in app.state.cache:
            row = network_summary(dataset.graph, name=dataset.dynasty or "corpus")
            hist = degree_histogram(dataset.graph)
            app.state.cache["stats"] = {
                "name": row.name,
                "node_count": row.node_count,
                "edge_count": row.edge_count,
                "average_clustering": fmt(row.average_clustering),
                "average_path_length": fmt(row.average_path_length),
                "reachable_pairs": row.reachable_pairs,
                "components": row.components,
                "isolated_nodes": row.isolated_nodes,
                "sign_counts": sign_counts(dataset.graph),
                "degree_histogram": [[d, c] for d, c in hist],
                "notes": [
                    "average path length is over mutually reachable ordered pairs",
                    "isolated vertices are kept in the graph",
                ],
            }
        return json_response(app.state.cache["stats"])

    @app.get("/api/persons")
    def persons(q: str = "", limit: int = 20, offset: int = 0) -> Response:
        if limit < 1 or offset < 0:
            raise BadQuery("limit must be >= 1 and offset >= 0")
        needle = q.strip().lower()
        matches = []
        for pid in sorted(dataset.persons):
            p = dataset.persons[pid]
            if (not needle or needle in p.name_en.lower() or needle == p.name_cn
                    or needle == str(pid)):
                matches.append(p)
        items = [{
            "person_id": p.person_id,
            "name_cn": p.name_cn,
            "name_en": p.name_en,
            "dynasty": p.dynasty_label,
            "birth_year": p.birth_year,
            "death_year": p.death_year,
            "degree": dataset.graph.degree(p.person_id),
        } for p in matches[offset:offset + limit]]
        return json_response({"query": q, "total": len(matches),
                              "offset": offset, "items": items})

    @app.get("/api/centrality")
    def centrality(top: int = 15, order_by: str = "degree") -> Response:
        if order_by not in centrality_mod.MEASURES:
            raise BadQuery(f"order_by must be one of {centrality_mod.MEASURES}")
        if top < 1:
            raise BadQuery("top must be >= 1")
        if "centrality" not in app.state.cache:
            app.state.cache["centrality"] = run(centrality_mod.compute_report,
                                                dataset.graph)
        report = app.state.cache["centrality"]
        rows = centrality_mod.top_central(report, top, order_by)
        return json_response({
            "node_count": report.node_count,
            "edge_count": report.edge_count,
            "order_by": order_by,
            "eigenvector_converged": report.eigenvector_converged,
            "notes": list(report.notes),
            "rows": [centrality_row_dict(r, dataset.display_name(r.node)) for r in rows],
        })

    @app.get("/api/subgraph")
    def subgraph(seeds: str, depth: int = 0) -> Response:
        seed_ids = _parse_seeds(seeds)
        ball = guarded_ball(seed_ids, depth)
        payload = dataset_to_dict(dataset.restrict(ball))
        payload["ball_sizes"] = ball_sizes(dataset.graph, SeedQuery(seed_ids, depth),
                                           max_depth)
        return json_response(payload)

    @app.post("/api/partition")
    async def partition(request: Request) -> Response:
        params = await _json_body(request)
        preq = _parse_partition_request(params)
        if params.get("seeds") is not None:
            ball = guarded_ball(_parse_seeds(params["seeds"]),
                                _parse_int(params.get("depth"), "depth", default=0, minimum=0))
            graph = dataset.restrict(ball).graph
        else:
            if dataset.graph.node_count() > node_cap:
                raise NodeCapExceeded(dataset.graph.node_count(), node_cap)
            graph = dataset.graph
        result = run(preq.run, graph)
        return json_response(partition_to_dict(result))

    @app.get("/api/pair")
    def pair(u: int, v: int) -> Response:
        return json_response(pair_to_dict(pair_relationship(dataset, u, v)))

    @app.post("/api/report")
    async def report(request: Request) -> Response:
        params = await _json_body(request)
        seeds = _parse_seeds(params.get("seeds"))
        depth = _parse_int(params.get("depth"), "depth", default=0, minimum=0)
        top = _parse_int(params.get("top"), "top", default=15, minimum=1)
        order_by = str(params.get("order_by", "degree"))
        if order_by not in centrality_mod.MEASURES:
            raise BadQuery(f"order_by must be one of {centrality_mod.MEASURES}")
        preq = _parse_partition_request(params)
        guarded_ball(seeds, depth)  # size check before the heavy work
        result = run(three_part_report, dataset, SeedQuery(seeds, depth), preq,
                     top, order_by, max_depth)
        return json_response(report_to_dict(result))

    return app


async def _json_body(request: Request) -> Mapping:
    try:
        payload = await request.json()
    except json.JSONDecodeError:
        raise BadQuery("request body must be a JSON object") from None
    if not isinstance(payload, Mapping):
        raise BadQuery("request body must be a JSON object")
    return payload


def serve(snapshot_path: str, host: str = "127.0.0.1", port: int = 8000,
          node_cap: int = DEFAULT_NODE_CAP, workers: int = 4,
          max_depth: int = DEFAULT_DEPTH_CAP, ui_dir: Optional[str] = None) -> None:
    """Load the snapshot and run the service until interrupted."""
    import uvicorn

    dataset = load_snapshot(snapshot_path)
    log.info("loaded snapshot %s: %s", snapshot_path, dataset.graph)
    app = create_app(dataset, node_cap=node_cap, workers=workers, max_depth=max_depth)
    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    uvicorn.run(app, host=host, port=port, log_level="info")
