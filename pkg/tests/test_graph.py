"""Graph value type: construction invariants, traversal, serialization."""

import pytest
from hypothesis import given, strategies as st

from keynetsim import graph
from keynetsim.graph import Graph

from oracles import union_find_connected


def test_empty_graph():
    g = Graph(0)
    assert g.node_count == 0
    assert g.edge_count() == 0
    assert list(g.edges()) == []


def test_single_node_connected():
    g = Graph(1)
    assert graph.is_connected(g)
    assert graph.min_degree(g) == 0


def test_construction_canonicalizes():
    # duplicates and reversed orientation collapse to one undirected edge
    g = Graph(3, [(0, 1), (1, 0), (0, 1), (2, 1)])
    assert g.edge_count() == 2
    assert g.neighbors(1) == (0, 2)
    assert list(g.edges()) == [(0, 1), (1, 2)]


def test_neighbor_tuples_sorted():
    g = Graph(5, [(4, 0), (2, 0), (3, 0)])
    assert g.neighbors(0) == (2, 3, 4)


def test_rejects_self_loop():
    with pytest.raises(ValueError):
        Graph(3, [(1, 1)])


def test_rejects_out_of_range():
    with pytest.raises(ValueError):
        Graph(3, [(0, 3)])
    with pytest.raises(ValueError):
        Graph(3, [(-1, 0)])


def test_immutable():
    g = Graph(2, [(0, 1)])
    with pytest.raises(AttributeError):
        g.node_count = 5


def test_has_edge():
    g = Graph(4, [(0, 1), (2, 3)])
    assert g.has_edge(0, 1) and g.has_edge(1, 0)
    assert not g.has_edge(0, 2)
    with pytest.raises(ValueError):
        g.has_edge(0, 4)


def test_degree_and_min_degree():
    g = Graph(4, [(0, 1), (0, 2), (0, 3)])  # star
    assert graph.degree(g, 0) == 3
    assert graph.degree(g, 1) == 1
    assert graph.min_degree(g) == 1


def test_path_is_connected_bridge_removal_disconnects():
    path = Graph(4, [(0, 1), (1, 2), (2, 3)])
    assert graph.is_connected(path)
    broken = Graph(4, [(0, 1), (2, 3)])
    assert not graph.is_connected(broken)


def test_intersect_keeps_common_edges_only():
    a = Graph(4, [(0, 1), (1, 2), (2, 3)])
    b = Graph(4, [(1, 2), (2, 3), (3, 0)])
    both = graph.intersect(a, b)
    assert sorted(both.edges()) == [(1, 2), (2, 3)]


def test_intersect_rejects_mismatched_sizes():
    with pytest.raises(ValueError):
        graph.intersect(Graph(3), Graph(4))


def test_edge_list_text_round_trip():
    g = Graph(5, [(0, 4), (1, 2), (2, 3)])
    text = graph.to_edge_list_text(g)
    assert text.splitlines()[0] == "n 5"
    assert graph.from_edge_list_text(text) == g


def test_edge_list_text_rejects_garbage():
    with pytest.raises(ValueError):
        graph.from_edge_list_text("not a header\n0 1\n")
    with pytest.raises(ValueError):
        graph.from_edge_list_text("n 3\n0 1 2\n")


@st.composite
def random_graphs(draw, max_nodes=12):
    n = draw(st.integers(min_value=1, max_value=max_nodes))
    possible = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = draw(st.lists(st.sampled_from(possible), max_size=len(possible))) if possible else []
    return Graph(n, edges)


@given(random_graphs())
def test_round_trip_preserves_graph(g):
    assert graph.from_edge_list_text(graph.to_edge_list_text(g)) == g


@given(random_graphs())
def test_is_connected_matches_union_find(g):
    assert graph.is_connected(g) == union_find_connected(g.node_count, list(g.edges()))


@given(random_graphs())
def test_handshake_identity(g):
    assert sum(graph.degree(g, i) for i in range(g.node_count)) == 2 * g.edge_count()


@given(random_graphs(), random_graphs())
def test_intersect_is_subgraph_of_both(a, b):
    if a.node_count != b.node_count:
        return
    both = graph.intersect(a, b)
    for i, j in both.edges():
        assert a.has_edge(i, j) and b.has_edge(i, j)
    # and nothing common was dropped
    for i, j in a.edges():
        if b.has_edge(i, j):
            assert both.has_edge(i, j)
