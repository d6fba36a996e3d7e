import random

import hypothesis
import pytest

from campnet.graph import Sign, SignedGraph

hypothesis.settings.register_profile("ci", max_examples=60, deadline=None)
hypothesis.settings.load_profile("ci")


@pytest.fixture
def triangle() -> SignedGraph:
    return SignedGraph.build([(0, 1, "+"), (1, 2, "+"), (0, 2, "+")])


@pytest.fixture
def frustrated_triangle() -> SignedGraph:
    return SignedGraph.build([(0, 1, "+"), (1, 2, "+"), (0, 2, "-")])


@pytest.fixture
def path3() -> SignedGraph:
    return SignedGraph.build([(0, 1, "+"), (1, 2, "+")])


def star(leaves: int) -> SignedGraph:
    return SignedGraph.build([(0, i, "+") for i in range(1, leaves + 1)])


def complete(n: int, sign: str = "+") -> SignedGraph:
    edges = [(u, v, sign) for u in range(n) for v in range(u + 1, n)]
    return SignedGraph.build(edges)


def two_camp_k4() -> SignedGraph:
    """Balanced K4: two hostile pairs, positive inside, negative across."""
    return SignedGraph.build([
        (0, 1, "+"), (2, 3, "+"),
        (0, 2, "-"), (0, 3, "-"), (1, 2, "-"), (1, 3, "-"),
    ])


def seeded_rng(seed: int) -> random.Random:
    return random.Random(seed)
