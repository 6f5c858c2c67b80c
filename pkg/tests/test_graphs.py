import itertools

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netcay.errors import GraphTooLarge, ProductTooLarge, SpecParseError
from netcay.graphs import (
    SimpleGraph,
    VertexMap,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    direct_product_graph,
    disjoint_union,
    graph_isomorphic,
    hypercube,
    is_full_subdirect,
    product_coords,
    product_index,
)


@st.composite
def graphs(draw, max_n=8):
    n = draw(st.integers(0, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return SimpleGraph.from_edges(n, chosen)


def to_nx(g: SimpleGraph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.vertex_count))
    h.add_edges_from(g.edges())
    return h


def brute_isomorphic(g1: SimpleGraph, g2: SimpleGraph) -> bool:
    if g1.vertex_count != g2.vertex_count:
        return False
    e1 = set(g1.edges())
    for p in itertools.permutations(range(g2.vertex_count)):
        if {tuple(sorted((p[u], p[v]))) for u, v in e1} == set(g2.edges()):
            return True
    return False


def test_validation():
    with pytest.raises(ValueError):
        SimpleGraph(2, (0b10, 0))
    with pytest.raises(ValueError):
        SimpleGraph(1, (1,))
    with pytest.raises(ValueError):
        SimpleGraph.from_edges(2, [(1, 1)])


def test_named_graphs():
    assert complete_graph(4).edge_count == 6
    assert cycle_graph(6).is_regular(2)
    assert complete_bipartite(3, 3).is_regular(3)
    q3 = hypercube(3)
    assert q3.edge_count == 12 and q3.is_regular(3)
    assert q3.complement().is_regular(4)
    assert not disjoint_union(complete_graph(2), complete_graph(2)).is_connected()


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=20))
def test_graph6_matches_networkx(g):
    text = g.to_graph6()
    assert text == nx.to_graph6_bytes(to_nx(g), header=False).decode().strip()
    assert SimpleGraph.from_graph6(text) == g


def test_graph6_long_header():
    g = cycle_graph(70)
    text = g.to_graph6()
    assert text.startswith("~")
    assert text == nx.to_graph6_bytes(to_nx(g), header=False).decode().strip()
    assert SimpleGraph.from_graph6(">>graph6<<" + text) == g


def test_graph6_errors():
    with pytest.raises(SpecParseError):
        SimpleGraph.from_graph6("")
    with pytest.raises(SpecParseError):
        SimpleGraph.from_graph6("~~??????")
    with pytest.raises(SpecParseError):
        SimpleGraph.from_graph6("E")


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=7), st.data())
def test_isomorphism_against_permutations(g, data):
    perm = data.draw(st.permutations(range(g.vertex_count)))
    h = SimpleGraph.from_edges(g.vertex_count, [(perm[u], perm[v]) for u, v in g.edges()])
    m = graph_isomorphic(g, h)
    assert m is not None
    assert all(h.has_edge(m[u], m[v]) for u, v in g.edges())
    assert len(set(m)) == g.vertex_count


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=6), graphs(max_n=6))
def test_isomorphism_decision_matches_brute_force(g1, g2):
    assert (graph_isomorphic(g1, g2) is not None) == brute_isomorphic(g1, g2)


def test_isomorphism_hard_regular_pairs():
    # regular pairs with equal degree sequences: C6 vs 2K3, K_{3,3} vs prism
    assert graph_isomorphic(cycle_graph(6), disjoint_union(cycle_graph(3), cycle_graph(3))) is None
    prism = SimpleGraph.from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)])
    assert graph_isomorphic(complete_bipartite(3, 3), prism) is None
    assert graph_isomorphic(hypercube(4), hypercube(4).complement().complement()) is not None
    with pytest.raises(GraphTooLarge):
        graph_isomorphic(cycle_graph(10), cycle_graph(10), cap=5)


@settings(max_examples=30, deadline=None)
@given(graphs(max_n=5), graphs(max_n=5))
def test_direct_product_matches_networkx(g1, g2):
    p = direct_product_graph([g1, g2])
    ref = nx.tensor_product(to_nx(g1), to_nx(g2))
    sizes = [g1.vertex_count, g2.vertex_count]
    assert p.vertex_count == ref.number_of_nodes()
    assert set(p.edges()) == {
        tuple(sorted((product_index(u, sizes), product_index(v, sizes)))) for u, v in ref.edges()
    }


def test_product_cap():
    with pytest.raises(ProductTooLarge):
        direct_product_graph([complete_graph(10)] * 3, cap=500)


@given(st.lists(st.integers(1, 5), min_size=1, max_size=4), st.data())
def test_product_index_round_trip(sizes, data):
    coords = tuple(data.draw(st.integers(0, s - 1)) for s in sizes)
    assert product_coords(product_index(coords, sizes), sizes) == coords


def test_full_subdirect():
    k2, k3 = complete_graph(2), complete_graph(3)
    # K2 x K3 itself is a full subdirect product
    assert is_full_subdirect(range(6), [k2, k3])
    # a single edge of the product is not (K3 has uncovered edges)
    chk = is_full_subdirect([0, 4], [k2, k3])
    assert not chk and "no preimage" in chk.failure
    # edges that are not product edges are rejected
    assert not is_full_subdirect(range(6), [k2, k3], edges=[(0, 1)])


def test_vertex_map():
    c6 = cycle_graph(6)
    m = VertexMap(c6, complete_graph(2), tuple(v % 2 for v in range(6)))
    assert m.is_homomorphism()
    assert not m.is_injective()
