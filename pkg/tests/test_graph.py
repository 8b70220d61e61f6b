from __future__ import annotations

import random

import pytest

from mutexcover.errors import InputError
from mutexcover.graph import (
    build_graph,
    canonical_edge,
    complement,
    connected_components,
    induced_subgraph,
    read_graph,
    write_graph,
)

# Figure-style 5-vertex example: a..e = 0..4
EX_EDGES = [(0, 1), (0, 2), (0, 4), (1, 2), (1, 4), (2, 3), (2, 4), (3, 4)]


def ex_graph():
    return build_graph(5, EX_EDGES, labels=list("abcde"))


def test_canonical_edge():
    assert canonical_edge(3, 1) == (1, 3)
    assert canonical_edge(1, 3) == (1, 3)
    with pytest.raises(InputError):
        canonical_edge(2, 2)


def test_basic_accessors():
    g = ex_graph()
    assert g.n == 5
    assert g.edge_count() == 8
    assert g.has_edge(4, 0) and not g.has_edge(0, 3)
    assert g.neighbors(2) == [0, 1, 3, 4]
    assert g.degree(0) == 3
    assert g.label_of(3) == "d"
    assert g.edges() == sorted(EX_EDGES)


def test_out_of_range_edge_rejected():
    with pytest.raises(InputError):
        build_graph(3, [(0, 3)])
    with pytest.raises(InputError):
        build_graph(3, [(-1, 0)])


def test_complement_of_example():
    comp = complement(ex_graph())
    assert comp.edges() == [(0, 3), (1, 3)]
    # complement twice is identity
    assert complement(comp).edges() == sorted(EX_EDGES)


def test_induced_subgraph_and_mapping():
    g = ex_graph()
    sub, mapping = induced_subgraph(g, [0, 1, 3])
    assert mapping == [0, 1, 3]
    assert sub.n == 3
    assert sub.edges() == [(0, 1)]  # only (a,b) survives among {a,b,d}


def test_connected_components_order():
    g = build_graph(6, [(4, 5), (0, 2), (2, 1)])
    assert connected_components(g) == [[0, 1, 2], [3], [4, 5]]


def test_components_of_complement_give_partitions():
    # on the example graph restricted to all vertices, complement has
    # edges (a,d),(b,d) -> components {a,b,d},{c},{e}
    comp = complement(ex_graph())
    assert connected_components(comp) == [[0, 1, 3], [2], [4]]


def test_text_format_round_trip():
    g = ex_graph()
    text = write_graph(g)
    g2 = read_graph(text)
    assert g2 == g
    assert g2.labels == g.labels
    assert write_graph(g2) == text  # canonical form is a fixpoint


def test_read_graph_rejects_garbage():
    with pytest.raises(InputError):
        read_graph("not a graph\n")
    with pytest.raises(InputError):
        read_graph("p 2 1\ne 0 5\n")
    with pytest.raises(InputError):
        read_graph("p 2 2\ne 0 1\n")  # edge count mismatch


def test_round_trip_random_graphs():
    rng = random.Random(7)
    for _ in range(25):
        n = rng.randint(1, 12)
        edges = set()
        for u in range(n):
            for v in range(u + 1, n):
                if rng.random() < 0.4:
                    edges.add((u, v))
        g = build_graph(n, edges)
        assert read_graph(write_graph(g)) == g
