import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from campnet.graph import GraphError, Sign, SignedEdge, SignedGraph, UnknownNodeError

from conftest import star
from oracles import random_signed_graph


def test_empty_graph_counts():
    g = SignedGraph([])
    assert g.node_count() == 0
    assert g.edge_count() == 0


def test_triangle_counts(triangle):
    assert triangle.node_count() == 3
    assert triangle.edge_count() == 3


def test_sign_symbols_roundtrip():
    for s in Sign:
        assert Sign.from_symbol(s.symbol) is s
    with pytest.raises(ValueError):
        Sign.from_symbol("x")


def test_edge_canonicalization():
    e = SignedEdge.make(5, 2, "+", 3)
    assert (e.u, e.v) == (2, 5)
    assert e.weight == 3 and e.pos_count == 3


def test_edge_rejects_self_loop_and_bad_counts():
    with pytest.raises(GraphError):
        SignedEdge.make(1, 1, "+")
    with pytest.raises(GraphError):
        SignedEdge(1, 2, 2, Sign.POSITIVE, 1, 0, 0)  # weight != count total
    with pytest.raises(GraphError):
        SignedEdge(1, 2, 0, Sign.NEUTRAL, 0, 0, 0)  # no supporting records


def test_parallel_edges_rejected():
    edges = [SignedEdge.make(0, 1, "+"), SignedEdge.make(1, 0, "-")]
    with pytest.raises(GraphError):
        SignedGraph([0, 1], edges)


def test_neighbors_star_and_isolated():
    g = star(3)
    assert g.neighbors(0) == {1, 2, 3}
    assert g.neighbors(1) == {0}
    iso = SignedGraph([7])
    assert iso.neighbors(7) == frozenset()


def test_neighbors_unknown_node():
    g = star(2)
    with pytest.raises(UnknownNodeError):
        g.neighbors(99)


def test_edge_lookup_symmetric(triangle):
    assert triangle.edge(0, 2) is triangle.edge(2, 0)
    assert triangle.edge(0, 2).sign is Sign.POSITIVE


def test_induced_subgraph_identity(triangle):
    assert triangle.induced_subgraph(triangle.nodes) == triangle


def test_induced_subgraph_single_node(triangle):
    sub = triangle.induced_subgraph([1])
    assert sub.node_count() == 1 and sub.edge_count() == 0


def test_induced_subgraph_two_of_triangle(triangle):
    # enumeration oracle: exactly the one edge with both endpoints inside
    sub = triangle.induced_subgraph([0, 2])
    assert sub.node_count() == 2
    assert [e.key for e in sub.edges()] == [(0, 2)]


def test_induced_subgraph_unknown_ids_listed(triangle):
    with pytest.raises(UnknownNodeError) as exc:
        triangle.induced_subgraph([0, 11, 12])
    assert exc.value.missing == (11, 12)


def test_induced_preserves_edge_attributes():
    g = SignedGraph.build([(0, 1, "-", 4), (1, 2, "+", 2)])
    sub = g.induced_subgraph([0, 1])
    (e,) = sub.edges()
    assert e == g.edge(0, 1)


@given(st.integers(0, 10_000))
def test_random_graph_properties(seed):
    rng = random.Random(seed)
    g = random_signed_graph(rng, rng.randint(0, 12), rng.random())
    # handshake: sum of degrees is twice the edge count
    assert sum(g.degree(v) for v in g.nodes) == 2 * g.edge_count()
    # neighbor symmetry and no self-membership
    for v in g.nodes:
        assert v not in g.neighbors(v)
        for u in g.neighbors(v):
            assert v in g.neighbors(u)


@given(st.integers(0, 10_000), st.data())
def test_induced_subgraph_idempotent(seed, data):
    rng = random.Random(seed)
    g = random_signed_graph(rng, rng.randint(1, 10), 0.4)
    vs = data.draw(st.sets(st.sampled_from(list(g.nodes))))
    once = g.induced_subgraph(vs)
    assert once.induced_subgraph(vs) == once


def test_nodes_sorted_ascending():
    g = SignedGraph([9, 3, 7])
    assert g.nodes == (3, 7, 9)


def test_components_ordering():
    g = SignedGraph.build([(0, 1, "+"), (5, 6, "+"), (6, 7, "+")], isolated=[9])
    comps = g.connected_components()
    assert comps == ((5, 6, 7), (0, 1), (9,))
