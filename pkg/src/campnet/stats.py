"""Descriptive network statistics: clustering, path length, degree distribution.

Path length is averaged over mutually reachable ordered pairs only, which is
the one definition that stays finite on disconnected corpora; the output says
so explicitly by carrying the reachable-pair count and component count.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from typing import Dict, List, Tuple

from .graph import Sign, SignedGraph


@dataclass(frozen=True)
class PathLengthSummary:
    average: float
    reachable_pairs: int        # ordered pairs u != v with finite distance
    components: int


@dataclass(frozen=True)
class NetworkSummary:
    """One row of the per-dynasty network table."""

    name: str
    node_count: int
    edge_count: int
    average_clustering: float
    average_path_length: float
    reachable_pairs: int
    components: int
    isolated_nodes: int


def average_clustering(g: SignedGraph, weighted: bool = False) -> float:
    """Mean local clustering coefficient over all nodes; degree-<2 nodes count 0.

    Weighted mode uses the geometric-mean generalization with edge weights
    normalized by the graph maximum: each triangle at v contributes
    (w1*w2*w3)^(1/3) instead of 1.
    """
    n = g.node_count()
    if n == 0:
        return 0.0
    if weighted:
        max_w = max((e.weight for e in g.edges()), default=0.0)
        if max_w == 0:
            return 0.0
    total = 0.0
    for v in g.nodes:
        nbrs = sorted(g.neighbors(v))
        k = len(nbrs)
        if k < 2:
            continue
        acc = 0.0
        for i in range(k):
            for j in range(i + 1, k):
                e_jk = g.edge(nbrs[i], nbrs[j])
                if e_jk is None:
                    continue
                if weighted:
                    w1 = g.edge(v, nbrs[i]).weight / max_w
                    w2 = g.edge(v, nbrs[j]).weight / max_w
                    w3 = e_jk.weight / max_w
                    acc += (w1 * w2 * w3) ** (1.0 / 3.0)
                else:
                    acc += 1.0
        total += 2.0 * acc / (k * (k - 1))
    return total / n


def bfs_distances(g: SignedGraph, source: int) -> Dict[int, int]:
    """Unweighted hop distances from ``source`` to every reachable node."""
    dist = {source: 0}
    queue = deque([source])
    while queue:
        x = queue.popleft()
        dx = dist[x]
        for y in g.neighbors(x):
            if y not in dist:
                dist[y] = dx + 1
                queue.append(y)
    return dist


def average_path_length(g: SignedGraph) -> PathLengthSummary:
    """Mean hop distance over mutually reachable ordered pairs (0 if none)."""
    components = len(g.connected_components())
    total = 0
    pairs = 0
    for v in g.nodes:
        dist = bfs_distances(g, v)
        pairs += len(dist) - 1
        total += sum(dist.values())
    average = total / pairs if pairs else 0.0
    return PathLengthSummary(average, pairs, components)


def degree_histogram(g: SignedGraph) -> List[Tuple[int, int]]:
    """(degree, count) pairs sorted ascending by degree; counts sum to |V|."""
    counts = Counter(g.degree(v) for v in g.nodes)
    return sorted(counts.items())


def network_summary(g: SignedGraph, name: str = "", weighted_clustering: bool = False) -> NetworkSummary:
    paths = average_path_length(g)
    isolated = sum(1 for v in g.nodes if g.degree(v) == 0)
    return NetworkSummary(
        name=name,
        node_count=g.node_count(),
        edge_count=g.edge_count(),
        average_clustering=average_clustering(g, weighted=weighted_clustering),
        average_path_length=paths.average,
        reachable_pairs=paths.reachable_pairs,
        components=paths.components,
        isolated_nodes=isolated,
    )


def sign_counts(g: SignedGraph) -> Dict[str, int]:
    """Edge counts per aggregate sign, for the stats table footer."""
    counts = {s.value: 0 for s in Sign}
    for e in g.edges():
        counts[e.sign.value] += 1
    return counts
