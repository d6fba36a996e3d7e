"""Four centrality measures over the unsigned structural graph.

Signs and weights are deliberately ignored: degree, betweenness, closeness
and eigenvector centrality are all computed on hop-count topology, which is
what the usual toolkit defaults produce for tables of "top people".
"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Mapping, Tuple

from .graph import SignedGraph
from .stats import bfs_distances

log = logging.getLogger(__name__)

MEASURES = ("degree", "betweenness", "closeness", "eigenvector")


@dataclass(frozen=True)
class CentralityRow:
    node: int
    degree: float
    betweenness: float
    closeness: float
    eigenvector: float


@dataclass(frozen=True)
class CentralityReport:
    """Per-node values for every measure, plus graph size metadata."""

    node_count: int
    edge_count: int
    degree: Mapping[int, float]
    betweenness: Mapping[int, float]
    closeness: Mapping[int, float]
    eigenvector: Mapping[int, float]
    eigenvector_converged: bool
    notes: Tuple[str, ...] = ()

    def row(self, v: int) -> CentralityRow:
        return CentralityRow(v, self.degree.get(v, 0.0), self.betweenness[v],
                             self.closeness[v], self.eigenvector[v])

    def rows(self) -> List[CentralityRow]:
        return [self.row(v) for v in sorted(self.betweenness)]


def degree_centrality(g: SignedGraph) -> Dict[int, float]:
    """deg(v)/(|V|-1) per node; empty with a warning when |V| < 2."""
    n = g.node_count()
    if n < 2:
        log.warning("degree centrality undefined for |V| < 2; returning empty result")
        return {}
    return {v: g.degree(v) / (n - 1) for v in g.nodes}


def betweenness_centrality(g: SignedGraph, normalized: bool = False) -> Dict[int, float]:
    """Shortest-path betweenness over unordered pairs, by BFS-DAG accumulation.

    Unnormalized by default; ``normalized`` divides by (n-1)(n-2)/2.
    """
    bc = {v: 0.0 for v in g.nodes}
    for s in g.nodes:
        # single-source shortest paths (unweighted)
        dist = {s: 0}
        sigma = {v: 0.0 for v in g.nodes}
        sigma[s] = 1.0
        preds: Dict[int, List[int]] = {v: [] for v in g.nodes}
        order: List[int] = []
        queue = deque([s])
        while queue:
            x = queue.popleft()
            order.append(x)
            for y in g.neighbors(x):
                if y not in dist:
                    dist[y] = dist[x] + 1
                    queue.append(y)
                if dist[y] == dist[x] + 1:
                    sigma[y] += sigma[x]
                    preds[y].append(x)
        # dependency accumulation in reverse BFS order
        delta = {v: 0.0 for v in order}
        while order:
            w = order.pop()
            for p in preds[w]:
                delta[p] += sigma[p] / sigma[w] * (1.0 + delta[w])
            if w != s:
                bc[w] += delta[w]
    for v in bc:
        bc[v] /= 2.0  # each unordered pair was seen from both endpoints
    if normalized:
        n = g.node_count()
        scale = (n - 1) * (n - 2) / 2.0
        for v in bc:
            bc[v] = bc[v] / scale if scale > 0 else 0.0
    return bc


def closeness_centrality(g: SignedGraph) -> Dict[int, float]:
    """Reachability-scaled closeness: (n/(|V|-1)) * (n/sum of distances).

    ``n`` is the number of nodes reachable from v (v excluded); isolated
    nodes score 0.
    """
    total = g.node_count()
    out: Dict[int, float] = {}
    for v in g.nodes:
        dist = bfs_distances(g, v)
        n = len(dist) - 1
        if n == 0 or total < 2:
            out[v] = 0.0
            continue
        s = sum(dist.values())
        out[v] = (n / (total - 1)) * (n / s)
    return out


def _is_bipartite(g: SignedGraph, component: Tuple[int, ...]) -> bool:
    color: Dict[int, int] = {}
    for start in component:
        if start in color:
            continue
        color[start] = 0
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in g.neighbors(x):
                if y not in color:
                    color[y] = 1 - color[x]
                    queue.append(y)
                elif color[y] == color[x]:
                    return False
    return True


def eigenvector_centrality(g: SignedGraph, max_iter: int = 100,
                           tol: float = 1e-8) -> Tuple[Dict[int, float], bool]:
    """Power iteration on the largest connected component.

    Nodes outside that component get 0; the returned vector has unit 2-norm.
    Bipartite components iterate on A + I so the iteration cannot oscillate.
    Returns (values, converged).
    """
    zeros = {v: 0.0 for v in g.nodes}
    if g.edge_count() == 0:
        log.warning("eigenvector centrality of an edgeless graph is all-zero")
        return zeros, True
    component = g.connected_components()[0]
    damp = _is_bipartite(g, component)
    x = {v: 1.0 for v in component}
    norm = math.sqrt(len(component))
    x = {v: val / norm for v, val in x.items()}
    converged = False
    for _ in range(max_iter):
        nxt = {v: (x[v] if damp else 0.0) for v in component}
        for v in component:
            xv = x[v]
            for u in g.neighbors(v):
                nxt[u] += xv
        norm = math.sqrt(sum(val * val for val in nxt.values()))
        if norm == 0.0:
            break
        nxt = {v: val / norm for v, val in nxt.items()}
        if sum(abs(nxt[v] - x[v]) for v in component) < tol:
            x = nxt
            converged = True
            break
        x = nxt
    if not converged:
        log.warning("eigenvector power iteration did not converge in %d iterations", max_iter)
    out = dict(zeros)
    out.update(x)
    return out, converged


def compute_report(g: SignedGraph, max_iter: int = 100, tol: float = 1e-8) -> CentralityReport:
    """All four measures for every node of ``g``."""
    notes: List[str] = []
    degree = degree_centrality(g)
    if not degree and g.node_count() > 0:
        notes.append("degree normalization undefined for |V| < 2; reported as 0")
        degree = {v: 0.0 for v in g.nodes}
    eig, converged = eigenvector_centrality(g, max_iter=max_iter, tol=tol)
    if g.edge_count() == 0 and g.node_count() > 0:
        notes.append("edgeless graph: eigenvector centrality is all-zero")
    return CentralityReport(
        node_count=g.node_count(),
        edge_count=g.edge_count(),
        degree=degree,
        betweenness=betweenness_centrality(g),
        closeness=closeness_centrality(g),
        eigenvector=eig,
        eigenvector_converged=converged,
        notes=tuple(notes),
    )


def top_central(report: CentralityReport, k: int, order_by: str = "degree") -> List[CentralityRow]:
    """Top-k rows by one measure, ties broken by ascending node id."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if order_by not in MEASURES:
        raise ValueError(f"order_by must be one of {MEASURES}, got {order_by!r}")
    values: Mapping[int, float] = getattr(report, order_by)
    ranked = sorted(values, key=lambda v: (-values[v], v))
    return [report.row(v) for v in ranked[:k]]
