"""Camp partitioning of signed graphs.

The objective is the imbalance of a partition: total weight of negative edges
kept inside groups plus positive edges split across groups (neutral edges are
free either way). Four strategies are provided: exact enumeration for tiny
graphs, greedy relocation search with a known group count, signed-modularity
local moving where the group count emerges, and a signed-Laplacian spectral
embedding followed by k-means.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .graph import Sign, SignedGraph

log = logging.getLogger(__name__)

BRUTE_FORCE_MAX_NODES = 12


class PartitionError(Exception):
    """Base class for partitioning failures."""


class ContractViolation(PartitionError):
    """An assignment does not cover every node of the graph."""


class SizeGuardError(PartitionError):
    """The graph is too large for exact enumeration."""


class NumericalError(PartitionError):
    """The eigensolver failed on the signed Laplacian."""


class Objective(str, Enum):
    IMBALANCE = "imbalance"
    SIGNED_MODULARITY = "signed_modularity"


class Algorithm(str, Enum):
    BRUTE_FORCE = "brute"
    GREEDY = "greedy"
    COMMUNITY = "community"
    SPECTRAL = "spectral"


@dataclass(frozen=True)
class Partition:
    """A full assignment of nodes to contiguous group indices 0..l-1."""

    assignment: Mapping[int, int]
    num_groups: int
    imbalance: float
    objective: Objective
    score: float
    algorithm: Algorithm
    seed: int

    def groups(self) -> List[List[int]]:
        out: List[List[int]] = [[] for _ in range(self.num_groups)]
        for v in sorted(self.assignment):
            out[self.assignment[v]].append(v)
        return out

    def group_sets(self) -> List[frozenset]:
        return [frozenset(g) for g in self.groups()]


def imbalance(g: SignedGraph, assignment: Mapping[int, int]) -> float:
    """Negative weight inside groups plus positive weight across groups."""
    missing = [v for v in g.nodes if v not in assignment]
    if missing:
        raise ContractViolation(f"assignment is missing node(s): {sorted(missing)}")
    total = 0.0
    for e in g.edges():
        same = assignment[e.u] == assignment[e.v]
        if e.sign is Sign.NEGATIVE and same:
            total += e.weight
        elif e.sign is Sign.POSITIVE and not same:
            total += e.weight
    return total


def canonical_assignment(g: SignedGraph, assignment: Mapping[int, int]) -> Tuple[Dict[int, int], int]:
    """Relabel groups by first appearance over ascending node ids: contiguous, no gaps."""
    relabel: Dict[int, int] = {}
    out: Dict[int, int] = {}
    for v in g.nodes:
        if v not in assignment:
            raise ContractViolation(f"assignment is missing node(s): [{v}]")
        grp = assignment[v]
        if grp not in relabel:
            relabel[grp] = len(relabel)
        out[v] = relabel[grp]
    return out, len(relabel)


def _finish(g: SignedGraph, assignment: Mapping[int, int], objective: Objective,
            score: Optional[float], algorithm: Algorithm, seed: int) -> Partition:
    canon, l = canonical_assignment(g, assignment)
    imb = imbalance(g, canon)
    return Partition(canon, l, imb, objective,
                     imb if score is None else score, algorithm, seed)


# -- exact enumeration ---------------------------------------------------------


def brute_force_partition(g: SignedGraph, max_groups: Optional[int] = None) -> Partition:
    """Exhaustive minimum-imbalance partition into at most ``max_groups`` groups.

    Enumerates set partitions in restricted-growth order (one representative
    per relabeling class) with branch-and-bound pruning, so the first optimum
    found is the lexicographically smallest canonical assignment.
    """
    n = g.node_count()
    if n == 0:
        raise PartitionError("cannot partition an empty graph")
    if n > BRUTE_FORCE_MAX_NODES:
        raise SizeGuardError(
            f"brute force is guarded at |V| <= {BRUTE_FORCE_MAX_NODES}, got {n}")
    cap = n if max_groups is None else max_groups
    if cap < 1:
        raise PartitionError(f"max_groups must be >= 1, got {max_groups}")
    cap = min(cap, n)

    nodes = g.nodes
    index = {v: i for i, v in enumerate(nodes)}
    # per node: edges to lower-indexed nodes as (other_index, pos_weight, neg_weight)
    back_edges: List[List[Tuple[int, float, float]]] = [[] for _ in nodes]
    for e in g.edges():
        if e.sign is Sign.NEUTRAL:
            continue
        i, j = index[e.u], index[e.v]
        lo, hi = (i, j) if i < j else (j, i)
        pos = e.weight if e.sign is Sign.POSITIVE else 0.0
        neg = e.weight if e.sign is Sign.NEGATIVE else 0.0
        back_edges[hi].append((lo, pos, neg))

    best_cost = float("inf")
    best: Optional[List[int]] = None
    assign = [0] * n

    def rec(i: int, used: int, partial: float) -> None:
        nonlocal best_cost, best
        if partial >= best_cost:
            return
        if i == n:
            best_cost = partial
            best = assign[:]
            return
        for grp in range(min(used + 1, cap)):
            delta = 0.0
            for j, pos, neg in back_edges[i]:
                if assign[j] == grp:
                    delta += neg
                else:
                    delta += pos
            assign[i] = grp
            rec(i + 1, max(used, grp + 1), partial + delta)

    rec(0, 0, 0.0)
    assert best is not None
    return _finish(g, {v: best[i] for i, v in enumerate(nodes)},
                   Objective.IMBALANCE, None, Algorithm.BRUTE_FORCE, 0)


# -- greedy relocation search ----------------------------------------------------


def greedy_partition(g: SignedGraph, l: int, restarts: int = 16, seed: int = 0) -> Partition:
    """Best-improvement single-node relocation search with random restarts.

    Assumes the number of groups ``l`` is known. Each restart draws a uniform
    random assignment and relocates one node at a time, always applying the
    move with the largest strict decrease of the imbalance, until none exists.
    The best restart wins; everything is deterministic given ``seed``.
    """
    n = g.node_count()
    if n == 0:
        raise PartitionError("cannot partition an empty graph")
    if not 1 <= l <= n:
        raise PartitionError(f"group count must satisfy 1 <= l <= |V|={n}, got {l}")
    if restarts < 1:
        raise PartitionError(f"restarts must be >= 1, got {restarts}")

    nodes = g.nodes
    master = random.Random(seed)
    best_assign: Optional[Dict[int, int]] = None
    best_cost = float("inf")
    for _ in range(restarts):
        rng = random.Random(master.randrange(2 ** 63))
        assign = {v: rng.randrange(l) for v in nodes}
        _relocate_to_local_minimum(g, assign, l)
        cost = imbalance(g, assign)
        if cost < best_cost:
            best_cost = cost
            best_assign = assign
    assert best_assign is not None
    return _finish(g, best_assign, Objective.IMBALANCE, None, Algorithm.GREEDY, seed)


def _relocate_to_local_minimum(g: SignedGraph, assign: Dict[int, int], l: int) -> None:
    while True:
        best_delta = 0.0
        best_move: Optional[Tuple[int, int]] = None
        for v in g.nodes:
            current = assign[v]
            pos_to = [0.0] * l
            neg_to = [0.0] * l
            for e in g.incident_edges(v):
                other = e.v if e.u == v else e.u
                grp = assign[other]
                if e.sign is Sign.POSITIVE:
                    pos_to[grp] += e.weight
                elif e.sign is Sign.NEGATIVE:
                    neg_to[grp] += e.weight
            for target in range(l):
                if target == current:
                    continue
                # moving v: positive links to the old group start crossing,
                # links to the target stop; negative links do the opposite
                delta = (pos_to[current] - pos_to[target]
                         + neg_to[target] - neg_to[current])
                if delta < best_delta:
                    best_delta = delta
                    best_move = (v, target)
        if best_move is None:
            return
        assign[best_move[0]] = best_move[1]


# -- signed modularity local moving ------------------------------------------------


def signed_modularity(g: SignedGraph, assignment: Mapping[int, int],
                      gamma_pos: float = 1.0, gamma_neg: float = 1.0) -> float:
    """Weighted-average composition of positive- and negative-layer modularity.

    Q_s = (w+/(w+ + w-)) * Q+ - (w-/(w+ + w-)) * Q-, each layer scored by
    standard Newman modularity at its own resolution. Zero when the graph has
    no signed edges at all.
    """
    w_pos = sum(e.weight for e in g.edges() if e.sign is Sign.POSITIVE)
    w_neg = sum(e.weight for e in g.edges() if e.sign is Sign.NEGATIVE)
    if w_pos + w_neg == 0:
        return 0.0
    alpha = w_pos / (w_pos + w_neg)
    beta = w_neg / (w_pos + w_neg)
    q_pos = _layer_modularity(g, assignment, Sign.POSITIVE, gamma_pos)
    q_neg = _layer_modularity(g, assignment, Sign.NEGATIVE, gamma_neg)
    return alpha * q_pos - beta * q_neg


def _layer_modularity(g: SignedGraph, assignment: Mapping[int, int],
                      sign: Sign, gamma: float) -> float:
    m = sum(e.weight for e in g.edges() if e.sign is sign)
    if m == 0:
        return 0.0
    internal: Dict[int, float] = {}
    tot: Dict[int, float] = {}
    for e in g.edges():
        if e.sign is not sign:
            continue
        cu, cv = assignment[e.u], assignment[e.v]
        tot[cu] = tot.get(cu, 0.0) + e.weight
        tot[cv] = tot.get(cv, 0.0) + e.weight
        if cu == cv:
            internal[cu] = internal.get(cu, 0.0) + e.weight
    two_m = 2.0 * m
    return sum(2.0 * internal.get(c, 0.0) / two_m - gamma * (tot[c] / two_m) ** 2
               for c in tot)


class _Layer:
    """One sign layer of the (possibly aggregated) graph, with self-loop weights.

    Self loops appear once communities are contracted to super-nodes; with
    A_ii = 2 * self_w[i] the usual modularity bookkeeping carries over
    unchanged, and the layer total m is invariant under aggregation.
    """

    def __init__(self, n: int, gamma: float):
        self.gamma = gamma
        self.adj: List[Dict[int, float]] = [dict() for _ in range(n)]
        self.self_w = [0.0] * n
        self.k = [0.0] * n
        self.m = 0.0

    @classmethod
    def from_graph(cls, g: SignedGraph, sign: Sign, gamma: float,
                   index: Mapping[int, int]) -> "_Layer":
        layer = cls(len(index), gamma)
        for e in g.edges():
            if e.sign is not sign:
                continue
            i, j = index[e.u], index[e.v]
            layer.adj[i][j] = layer.adj[i].get(j, 0.0) + e.weight
            layer.adj[j][i] = layer.adj[j].get(i, 0.0) + e.weight
            layer.m += e.weight
        layer._refresh_degrees()
        return layer

    def _refresh_degrees(self) -> None:
        self.k = [sum(nbrs.values()) + 2.0 * s
                  for nbrs, s in zip(self.adj, self.self_w)]

    def community_tots(self, labels: Sequence[int]) -> Dict[int, float]:
        tot: Dict[int, float] = {}
        for i, c in enumerate(labels):
            tot[c] = tot.get(c, 0.0) + self.k[i]
        return tot

    def aggregate(self, labels: Sequence[int], n_groups: int) -> "_Layer":
        out = _Layer(n_groups, self.gamma)
        out.m = self.m
        for i, nbrs in enumerate(self.adj):
            ci = labels[i]
            out.self_w[ci] += self.self_w[i]
            for j, w in nbrs.items():
                if j < i:
                    continue  # each undirected edge once
                cj = labels[j]
                if ci == cj:
                    out.self_w[ci] += w
                else:
                    out.adj[ci][cj] = out.adj[ci].get(cj, 0.0) + w
                    out.adj[cj][ci] = out.adj[cj].get(ci, 0.0) + w
        out._refresh_degrees()
        return out


def _move_gain(layer: _Layer, tot: Dict[int, float], v: int, src: int, dst: int,
               labels: Sequence[int]) -> float:
    """This layer's modularity change when super-node v moves src -> dst."""
    if layer.m == 0:
        return 0.0
    kv = layer.k[v]
    w_src = sum(w for u, w in layer.adj[v].items() if labels[u] == src)
    w_dst = sum(w for u, w in layer.adj[v].items() if labels[u] == dst)
    gain_links = (w_dst - w_src) / layer.m
    gain_degrees = (layer.gamma * kv
                    * (tot.get(dst, 0.0) - (tot.get(src, 0.0) - kv))
                    / (2.0 * layer.m * layer.m))
    return gain_links - gain_degrees


def _local_moving(pos: _Layer, neg: _Layer, alpha: float, beta: float,
                  rng: random.Random) -> Tuple[List[int], int]:
    """One level of best-gain single-node moves; returns (labels, group count)."""
    n = len(pos.adj)
    labels = list(range(n))
    tot_pos = pos.community_tots(labels)
    tot_neg = neg.community_tots(labels)
    members = {c: 1 for c in range(n)}
    next_id = n
    order = list(range(n))
    rng.shuffle(order)
    eps = 1e-12
    moved = True
    while moved:
        moved = False
        for v in order:
            src = labels[v]
            neighbor_comms = {labels[u] for u in pos.adj[v]} | {labels[u] for u in neg.adj[v]}
            candidates = sorted(neighbor_comms - {src})
            if members[src] > 1:
                candidates.append(next_id)  # allow splitting off as a singleton
            best_gain = eps
            best_dst: Optional[int] = None
            for dst in candidates:
                gain = (alpha * _move_gain(pos, tot_pos, v, src, dst, labels)
                        - beta * _move_gain(neg, tot_neg, v, src, dst, labels))
                if gain > best_gain:
                    best_gain = gain
                    best_dst = dst
            if best_dst is None:
                continue
            for layer, tot in ((pos, tot_pos), (neg, tot_neg)):
                kv = layer.k[v]
                tot[src] = tot.get(src, 0.0) - kv
                tot[best_dst] = tot.get(best_dst, 0.0) + kv
            labels[v] = best_dst
            members[src] -= 1
            members[best_dst] = members.get(best_dst, 0) + 1
            if best_dst == next_id:
                next_id += 1
            moved = True
    # renumber level labels contiguously
    relabel: Dict[int, int] = {}
    for v in range(n):
        relabel.setdefault(labels[v], len(relabel))
    return [relabel[c] for c in labels], len(relabel)


def community_partition(g: SignedGraph, gamma_pos: float = 1.0, gamma_neg: float = 1.0,
                        seed: int = 0) -> Partition:
    """Signed-modularity maximization by local moving plus graph aggregation.

    Each level sweeps single super-nodes into the neighboring (or a fresh)
    community while the composed objective strictly improves, then contracts
    communities to super-nodes and repeats; the group count emerges. Neutral
    edges play no part. Deterministic given ``seed``.
    """
    if g.node_count() == 0:
        raise PartitionError("cannot partition an empty graph")
    if g.edge_count() == 0:
        log.warning("graph has no edges; community detection returns singletons")

    nodes = g.nodes
    index = {v: i for i, v in enumerate(nodes)}
    pos = _Layer.from_graph(g, Sign.POSITIVE, gamma_pos, index)
    neg = _Layer.from_graph(g, Sign.NEGATIVE, gamma_neg, index)
    if pos.m + neg.m == 0:
        assignment = {v: i for i, v in enumerate(nodes)}
        return _finish(g, assignment, Objective.SIGNED_MODULARITY, 0.0,
                       Algorithm.COMMUNITY, seed)
    alpha = pos.m / (pos.m + neg.m)
    beta = neg.m / (pos.m + neg.m)

    rng = random.Random(seed)
    membership = list(range(len(nodes)))  # original node -> current super-node
    while True:
        labels, n_groups = _local_moving(pos, neg, alpha, beta, rng)
        membership = [labels[c] for c in membership]
        if n_groups == len(pos.adj):
            break  # no contraction happened; local optimum reached
        pos = pos.aggregate(labels, n_groups)
        neg = neg.aggregate(labels, n_groups)

    assignment = {v: membership[i] for i, v in enumerate(nodes)}
    score = signed_modularity(g, assignment, gamma_pos, gamma_neg)
    return _finish(g, assignment, Objective.SIGNED_MODULARITY, score,
                   Algorithm.COMMUNITY, seed)


# -- spectral embedding + k-means ----------------------------------------------------


def spectral_embedding(g: SignedGraph, dim: int = 8) -> Tuple[np.ndarray, Tuple[int, ...]]:
    """Rows of the bottom eigenvectors of the signed Laplacian D - A_s.

    A_s carries +w for positive and -w for negative edges (neutral excluded);
    D is the diagonal of total signed weight per node. Returns the embedding
    matrix and the node order of its rows.
    """
    nodes = g.nodes
    n = len(nodes)
    index = {v: i for i, v in enumerate(nodes)}
    a = np.zeros((n, n))
    for e in g.edges():
        if e.sign is Sign.NEUTRAL:
            continue
        w = e.weight if e.sign is Sign.POSITIVE else -e.weight
        a[index[e.u], index[e.v]] = w
        a[index[e.v], index[e.u]] = w
    degrees = np.abs(a).sum(axis=1)
    lap = np.diag(degrees) - a
    try:
        _, vecs = np.linalg.eigh(lap)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigendecomposition of the signed Laplacian failed: {exc}") from exc
    take = min(dim, max(n - 1, 1))
    return vecs[:, :take], nodes


def spectral_partition(g: SignedGraph, k: int, dim: int = 8, seed: int = 0) -> Partition:
    """Signed-Laplacian embedding followed by seeded k-means into ``k`` groups.

    When the embedding has fewer distinct rows than ``k``, the cluster count
    is reduced to that number with a warning.
    """
    from sklearn.cluster import KMeans

    n = g.node_count()
    if n == 0:
        raise PartitionError("cannot partition an empty graph")
    if not 2 <= k <= n:
        raise PartitionError(f"cluster count must satisfy 2 <= k <= |V|={n}, got {k}")
    emb, nodes = spectral_embedding(g, dim)
    distinct = len(np.unique(np.round(emb, 9), axis=0))
    k_eff = min(k, distinct)
    if k_eff < k:
        log.warning("only %d distinct embedded points; reducing k from %d to %d",
                    distinct, k, k_eff)
    km = KMeans(n_clusters=k_eff, init="k-means++", n_init=10, max_iter=50,
                random_state=seed % (2 ** 32))
    labels = km.fit_predict(emb)
    assignment = {v: int(labels[i]) for i, v in enumerate(nodes)}
    return _finish(g, assignment, Objective.IMBALANCE, None, Algorithm.SPECTRAL, seed)


# -- strategy dispatch -------------------------------------------------------------


@dataclass(frozen=True)
class PartitionRequest:
    """Algorithm choice plus its parameters, as they arrive from CLI or HTTP."""

    algorithm: Algorithm
    seed: int = 0
    groups: Optional[int] = None  # l for greedy, k for spectral, cap for brute
    restarts: int = 16
    gamma_pos: float = 1.0
    gamma_neg: float = 1.0
    dim: int = 8

    def run(self, g: SignedGraph) -> Partition:
        if self.algorithm is Algorithm.BRUTE_FORCE:
            return brute_force_partition(g, self.groups)
        if self.algorithm is Algorithm.GREEDY:
            if self.groups is None:
                raise PartitionError("the greedy strategy needs an explicit group count")
            return greedy_partition(g, self.groups, self.restarts, self.seed)
        if self.algorithm is Algorithm.COMMUNITY:
            return community_partition(g, self.gamma_pos, self.gamma_neg, self.seed)
        if self.algorithm is Algorithm.SPECTRAL:
            if self.groups is None:
                raise PartitionError("the spectral strategy needs an explicit group count")
            return spectral_partition(g, self.groups, self.dim, self.seed)
        raise PartitionError(f"unknown algorithm {self.algorithm!r}")

    def params_dict(self) -> Dict[str, object]:
        return {
            "algorithm": self.algorithm.value,
            "seed": self.seed,
            "groups": self.groups,
            "restarts": self.restarts,
            "gamma_pos": self.gamma_pos,
            "gamma_neg": self.gamma_neg,
            "dim": self.dim,
        }
