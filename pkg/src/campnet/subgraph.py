"""Seed-centered subgraph extraction: the d-hop ball, then the induced signed graph.

Depth is guarded (default cap 4) because hop balls in small-world corpora go
near-global very quickly; the cap can be raised explicitly by callers that
mean it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Set, Tuple

from .graph import SignedGraph

DEFAULT_DEPTH_CAP = 4


class DepthCapError(Exception):
    """Requested depth exceeds the configured cap; pass a higher cap to override."""

    def __init__(self, depth: int, cap: int):
        self.depth = depth
        self.cap = cap
        super().__init__(
            f"depth {depth} exceeds the cap of {cap}; "
            f"pass an explicit max_depth (CLI: --max-depth) to override"
        )


@dataclass(frozen=True)
class SeedQuery:
    """A non-empty seed set and a hop depth d >= 0."""

    seeds: Tuple[int, ...]
    depth: int

    def __post_init__(self):
        if not self.seeds:
            raise ValueError("seed set must be non-empty")
        if self.depth < 0:
            raise ValueError(f"depth must be >= 0, got {self.depth}")
        object.__setattr__(self, "seeds", tuple(sorted(set(self.seeds))))

    def validate(self, g: SignedGraph, max_depth: int = DEFAULT_DEPTH_CAP) -> None:
        g.require_nodes(self.seeds)
        if self.depth > max_depth:
            raise DepthCapError(self.depth, max_depth)


def _expand(g: SignedGraph, q: SeedQuery) -> List[Set[int]]:
    """Frontier-by-frontier expansion; element i is the ball after i rounds."""
    ball: Set[int] = set(q.seeds)
    frontier: Set[int] = set(q.seeds)
    stages = [set(ball)]
    for _ in range(q.depth):
        nxt: Set[int] = set()
        for n in frontier:
            for n2 in g.neighbors(n):
                if n2 not in ball:
                    nxt.add(n2)
        ball |= nxt
        frontier = nxt
        stages.append(set(ball))
    return stages


def extract_subgraph(g: SignedGraph, q: SeedQuery,
                     max_depth: int = DEFAULT_DEPTH_CAP) -> SignedGraph:
    """The induced signed subgraph on all nodes within ``q.depth`` hops of any seed.

    Depth 0 gives the direct relationships among the seeds themselves.
    """
    q.validate(g, max_depth)
    return g.induced_subgraph(_expand(g, q)[-1])


def ball_nodes(g: SignedGraph, q: SeedQuery,
               max_depth: int = DEFAULT_DEPTH_CAP) -> Set[int]:
    """Just the node set of the d-hop ball."""
    q.validate(g, max_depth)
    return _expand(g, q)[-1]


def ball_sizes(g: SignedGraph, q: SeedQuery,
               max_depth: int = DEFAULT_DEPTH_CAP) -> List[int]:
    """|ball| after each expansion round 0..d; monotone non-decreasing."""
    q.validate(g, max_depth)
    return [len(stage) for stage in _expand(g, q)]
