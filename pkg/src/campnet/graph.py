"""Immutable signed weighted graph and the elementary queries everything else builds on.

Edges are undirected, stored once under the canonical orientation u < v, and
carry both an aggregate sign and the positive/negative/neutral record counts
that produced it. Graphs never change after construction, so any number of
analyses can share one instance.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Iterable, Iterator, Mapping, Sequence, Tuple


class GraphError(Exception):
    """Base class for graph construction and query errors."""


class UnknownNodeError(GraphError, KeyError):
    """A queried node id is not part of the graph."""

    def __init__(self, missing: Iterable[int]):
        self.missing = tuple(sorted(set(missing)))
        ids = ", ".join(str(m) for m in self.missing)
        super().__init__(f"unknown node id(s): {ids}")

    def __str__(self) -> str:  # KeyError would repr-quote the message
        return self.args[0]


class Sign(Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    NEUTRAL = "neutral"

    @classmethod
    def from_symbol(cls, symbol: str) -> "Sign":
        """Parse the rule-file symbols ``+``, ``-`` and ``0``."""
        try:
            return _SYMBOLS[symbol]
        except KeyError:
            raise ValueError(f"invalid sign symbol {symbol!r}, expected one of +, -, 0") from None

    @property
    def symbol(self) -> str:
        return {Sign.POSITIVE: "+", Sign.NEGATIVE: "-", Sign.NEUTRAL: "0"}[self]


_SYMBOLS = {"+": Sign.POSITIVE, "-": Sign.NEGATIVE, "0": Sign.NEUTRAL}


@dataclass(frozen=True)
class SignedEdge:
    """One aggregated undirected edge.

    ``weight`` is the total number of supporting records and always equals
    pos_count + neg_count + neu_count; the sign is whatever the aggregation
    rule produced (majority of positive vs negative record counts).
    """

    u: int
    v: int
    weight: float
    sign: Sign
    pos_count: int
    neg_count: int
    neu_count: int

    def __post_init__(self):
        if self.u == self.v:
            raise GraphError(f"self-loop on node {self.u} is not allowed")
        if self.u > self.v:
            raise GraphError(f"edge ({self.u}, {self.v}) must be stored with u < v")
        if min(self.pos_count, self.neg_count, self.neu_count) < 0:
            raise GraphError(f"edge ({self.u}, {self.v}) has a negative record count")
        total = self.pos_count + self.neg_count + self.neu_count
        if total < 1:
            raise GraphError(f"edge ({self.u}, {self.v}) has no supporting records")
        if self.weight != total:
            raise GraphError(
                f"edge ({self.u}, {self.v}) weight {self.weight} != record total {total}"
            )

    @classmethod
    def make(cls, u: int, v: int, sign: Sign | str, weight: int = 1) -> "SignedEdge":
        """Build an edge from an overall sign and an integer record count."""
        if isinstance(sign, str):
            sign = Sign.from_symbol(sign) if sign in _SYMBOLS else Sign(sign)
        if weight < 1 or weight != int(weight):
            raise GraphError(f"weight must be a positive integer, got {weight}")
        a, b = (u, v) if u < v else (v, u)
        counts = {Sign.POSITIVE: 0, Sign.NEGATIVE: 0, Sign.NEUTRAL: 0}
        counts[sign] = int(weight)
        return cls(a, b, int(weight), sign,
                   counts[Sign.POSITIVE], counts[Sign.NEGATIVE], counts[Sign.NEUTRAL])

    @property
    def key(self) -> Tuple[int, int]:
        return (self.u, self.v)


class SignedGraph:
    """Undirected signed weighted graph, immutable after construction.

    Nodes with no incident edges are legal (isolated vertices survive
    ingestion so corpus-level statistics see them).
    """

    def __init__(self, nodes: Iterable[int], edges: Iterable[SignedEdge] = ()):
        node_set = set()
        for n in nodes:
            if not isinstance(n, int) or n < 0:
                raise GraphError(f"node id must be a non-negative integer, got {n!r}")
            node_set.add(n)
        edge_map: Dict[Tuple[int, int], SignedEdge] = {}
        adj: Dict[int, Dict[int, SignedEdge]] = {n: {} for n in node_set}
        for e in edges:
            missing = {x for x in (e.u, e.v) if x not in node_set}
            if missing:
                raise UnknownNodeError(missing)
            if e.key in edge_map:
                raise GraphError(f"parallel edge ({e.u}, {e.v}); aggregate records first")
            edge_map[e.key] = e
            adj[e.u][e.v] = e
            adj[e.v][e.u] = e
        self._nodes: Tuple[int, ...] = tuple(sorted(node_set))
        self._node_set: FrozenSet[int] = frozenset(node_set)
        self._edges: Dict[Tuple[int, int], SignedEdge] = dict(sorted(edge_map.items()))
        self._adj = {n: dict(sorted(nbrs.items())) for n, nbrs in sorted(adj.items())}

    @classmethod
    def build(cls, edges: Sequence[Tuple[int, int, Sign | str, int]] | Sequence[Tuple[int, int, Sign | str]],
              isolated: Iterable[int] = ()) -> "SignedGraph":
        """Convenience constructor from (u, v, sign[, weight]) tuples."""
        built = []
        nodes = set(isolated)
        for entry in edges:
            u, v, sign = entry[0], entry[1], entry[2]
            weight = entry[3] if len(entry) > 3 else 1
            built.append(SignedEdge.make(u, v, sign, weight))
            nodes.update((u, v))
        return cls(nodes, built)

    # -- elementary queries -------------------------------------------------

    def node_count(self) -> int:
        return len(self._nodes)

    def edge_count(self) -> int:
        return len(self._edges)

    @property
    def nodes(self) -> Tuple[int, ...]:
        """All node ids in ascending order."""
        return self._nodes

    def edges(self) -> Iterator[SignedEdge]:
        """All edges in canonical (u, v) order."""
        return iter(self._edges.values())

    def has_node(self, v: int) -> bool:
        return v in self._node_set

    def require_nodes(self, ids: Iterable[int]) -> None:
        missing = [i for i in ids if i not in self._node_set]
        if missing:
            raise UnknownNodeError(missing)

    def neighbors(self, v: int) -> FrozenSet[int]:
        if v not in self._node_set:
            raise UnknownNodeError([v])
        return frozenset(self._adj[v])

    def degree(self, v: int) -> int:
        if v not in self._node_set:
            raise UnknownNodeError([v])
        return len(self._adj[v])

    def incident_edges(self, v: int) -> Tuple[SignedEdge, ...]:
        if v not in self._node_set:
            raise UnknownNodeError([v])
        return tuple(self._adj[v].values())

    def edge(self, u: int, v: int) -> SignedEdge | None:
        """The edge between u and v in either orientation, or None."""
        self.require_nodes((u, v))
        return self._edges.get((u, v) if u < v else (v, u))

    def induced_subgraph(self, vs: Iterable[int]) -> "SignedGraph":
        """Subgraph on ``vs`` with exactly the edges internal to it, attributes preserved."""
        wanted = set(vs)
        self.require_nodes(wanted)
        kept = [e for e in self._edges.values() if e.u in wanted and e.v in wanted]
        return SignedGraph(wanted, kept)

    # -- connectivity helpers ----------------------------------------------

    def connected_components(self) -> Tuple[Tuple[int, ...], ...]:
        """Components as sorted node tuples, ordered by (-size, smallest id)."""
        seen: set[int] = set()
        comps = []
        for start in self._nodes:
            if start in seen:
                continue
            stack = [start]
            comp = []
            seen.add(start)
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in self._adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            comps.append(tuple(sorted(comp)))
        comps.sort(key=lambda c: (-len(c), c[0]))
        return tuple(comps)

    def __contains__(self, v: int) -> bool:
        return v in self._node_set

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SignedGraph):
            return NotImplemented
        return self._nodes == other._nodes and self._edges == other._edges

    def __hash__(self):
        return hash((self._nodes, tuple(self._edges)))

    def __repr__(self):
        return f"SignedGraph(|V|={self.node_count()}, |E|={self.edge_count()})"


def node_count(g: SignedGraph) -> int:
    return g.node_count()


def edge_count(g: SignedGraph) -> int:
    return g.edge_count()


def neighbors(g: SignedGraph, v: int) -> FrozenSet[int]:
    return g.neighbors(v)


def induced_subgraph(g: SignedGraph, vs: Iterable[int]) -> SignedGraph:
    return g.induced_subgraph(vs)
