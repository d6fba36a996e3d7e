"""The three-part query answer: central people, pairwise evidence, group partition.

All three parts are computed on the same seed-centered subgraph, and the
serializers here emit stable key order, sorted arrays, and rounded floats so
that identical queries give byte-identical JSON.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Tuple

from .centrality import CentralityReport, CentralityRow, compute_report, top_central
from .graph import Sign
from .ingest import Dataset, EvidenceRecord, aggregate_sign
from .partition import Partition, PartitionRequest
from .subgraph import DEFAULT_DEPTH_CAP, SeedQuery, ball_nodes

FLOAT_DIGITS = 10


def fmt(x: float) -> float:
    """Fixed float formatting for golden-file stability."""
    r = round(float(x), FLOAT_DIGITS)
    return 0.0 if r == 0 else r


@dataclass(frozen=True)
class PairRelationshipReport:
    """All raw relationship evidence between two people, plus the net reading."""

    u: int
    v: int
    u_name: str
    v_name: str
    records: Tuple[EvidenceRecord, ...]
    pos_total: int
    neg_total: int
    neu_total: int
    net_sign: Sign


@dataclass(frozen=True)
class ThreePartReport:
    query: Dict[str, object]
    subgraph_nodes: int
    subgraph_edges: int
    central: List[CentralityRow]
    centrality: CentralityReport
    pairs: Tuple[PairRelationshipReport, ...]
    partition: Partition
    names: Dict[int, str]


def pair_relationship(ds: Dataset, u: int, v: int) -> PairRelationshipReport:
    """Evidence between u and v grouped by relationship code; empty -> net neutral."""
    if u == v:
        raise ValueError("pair endpoints must differ")
    ds.graph.require_nodes((u, v))
    a, b = (u, v) if u < v else (v, u)
    records = ds.pair_evidence(a, b)
    pos = sum(r.count for r in records if r.sign is Sign.POSITIVE)
    neg = sum(r.count for r in records if r.sign is Sign.NEGATIVE)
    neu = sum(r.count for r in records if r.sign is Sign.NEUTRAL)
    return PairRelationshipReport(a, b, ds.display_name(a), ds.display_name(b),
                                  records, pos, neg, neu, aggregate_sign(pos, neg))


def three_part_report(ds: Dataset, query: SeedQuery, request: PartitionRequest,
                      top: int = 15, order_by: str = "degree",
                      max_depth: int = DEFAULT_DEPTH_CAP) -> ThreePartReport:
    """Extract the subgraph, then rank people, collect seed-pair evidence, and partition."""
    ball = ball_nodes(ds.graph, query, max_depth)
    sub = ds.restrict(ball)
    cent = compute_report(sub.graph)
    central = top_central(cent, max(top, 1), order_by)[:top]
    seeds = query.seeds
    pairs = []
    for i in range(len(seeds)):
        for j in range(i + 1, len(seeds)):
            if sub.pair_evidence(seeds[i], seeds[j]):
                pairs.append(pair_relationship(sub, seeds[i], seeds[j]))
    part = request.run(sub.graph)
    echo: Dict[str, object] = {"seeds": list(seeds), "depth": query.depth}
    echo.update(request.params_dict())
    echo["top"] = top
    echo["order_by"] = order_by
    names = {v: sub.display_name(v) for v in sub.graph.nodes}
    return ThreePartReport(echo, sub.graph.node_count(), sub.graph.edge_count(),
                           central, cent, tuple(pairs), part, names)


# -- serialization ----------------------------------------------------------------


def evidence_dict(r: EvidenceRecord) -> Dict[str, object]:
    return {"rel_code": r.rel_code, "rel_name": r.rel_name,
            "sign": r.sign.value, "count": r.count}


def pair_to_dict(p: PairRelationshipReport) -> Dict[str, object]:
    return {
        "u": p.u,
        "v": p.v,
        "u_name": p.u_name,
        "v_name": p.v_name,
        "records": [evidence_dict(r) for r in p.records],
        "pos_total": p.pos_total,
        "neg_total": p.neg_total,
        "neu_total": p.neu_total,
        "net_sign": p.net_sign.value,
    }


def partition_to_dict(p: Partition) -> Dict[str, object]:
    return {
        "assignment": {str(v): p.assignment[v] for v in sorted(p.assignment)},
        "l": p.num_groups,
        "imbalance": fmt(p.imbalance),
        "objective": p.objective.value,
        "score": fmt(p.score),
        "algorithm": p.algorithm.value,
        "seed": p.seed,
        "groups": p.groups(),
    }


def centrality_row_dict(row: CentralityRow, name: str) -> Dict[str, object]:
    return {
        "person_id": row.node,
        "name": name,
        "degree": fmt(row.degree),
        "betweenness": fmt(row.betweenness),
        "closeness": fmt(row.closeness),
        "eigenvector": fmt(row.eigenvector),
    }


def report_to_dict(r: ThreePartReport) -> Dict[str, object]:
    return {
        "query": r.query,
        "subgraph": {"node_count": r.subgraph_nodes, "edge_count": r.subgraph_edges},
        "central": [centrality_row_dict(row, r.names.get(row.node, str(row.node)))
                    for row in r.central],
        "centrality_meta": {
            "eigenvector_converged": r.centrality.eigenvector_converged,
            "notes": list(r.centrality.notes),
        },
        "pairs": [pair_to_dict(p) for p in r.pairs],
        "partition": partition_to_dict(r.partition),
    }
