import networkx as nx
import numpy as np
import pytest

from graph_core import (
    Graph,
    GraphError,
    component_count_closed,
    component_count_induced,
    format_graph,
    is_cds,
    is_connected,
    members_of,
    parse_graph,
    read_graph,
    vertex_set,
    write_graph,
)


def all_subsets(n):
    for mask in range(1 << n):
        yield np.array([(mask >> i) & 1 for i in range(n)], dtype=bool)


# ==========================================
# p(C), q(C)
# ==========================================

def test_p_and_q_of_path_endpoints(p5):
    c = vertex_set(5, [1, 5])
    assert component_count_induced(p5, c) == 2
    assert component_count_closed(p5, c) == 3


def test_empty_set_counts(p5):
    empty = vertex_set(5)
    assert component_count_induced(p5, empty) == 0
    assert component_count_closed(p5, empty) == 5


def test_p_of_path_interior(p5):
    assert component_count_induced(p5, vertex_set(5, [2, 3, 4])) == 1


def test_q_single_vertex(p5):
    # {v1, v2, v3} плюс одиночки v4, v5
    assert component_count_closed(p5, vertex_set(5, [2])) == 3


def test_p_bounded_by_size(suite_graph):
    for c in all_subsets(suite_graph.n):
        p = component_count_induced(suite_graph, c)
        assert p <= c.sum()
        assert (p == 0) == (not c.any())


def test_q_is_one_iff_dominating_and_connected(suite_graph):
    g = suite_graph
    nxg = g.to_networkx()
    for c in all_subsets(g.n):
        q = component_count_closed(g, c)
        assert q >= 1
        chosen = set(members_of(c))
        if chosen:
            spanning = nx.Graph()
            spanning.add_nodes_from(nxg.nodes())
            spanning.add_edges_from((u, v) for u, v in nxg.edges() if u in chosen or v in chosen)
            expected = nx.is_dominating_set(nxg, chosen) and nx.is_connected(spanning)
            assert (q == 1) == expected


def test_q_never_increases_when_adding_vertex(small_suite_graph):
    g = small_suite_graph
    for c in all_subsets(g.n):
        q = component_count_closed(g, c)
        for v in np.flatnonzero(~c):
            bigger = c.copy()
            bigger[v] = True
            assert component_count_closed(g, bigger) <= q


# ==========================================
# is_cds / is_connected
# ==========================================

def test_is_cds_examples(p5, star4):
    assert is_cds(p5, vertex_set(5, [2, 3, 4]))
    assert not is_cds(p5, vertex_set(5, [1, 5]))
    assert is_cds(star4, vertex_set(5, [1]))
    assert not is_cds(star4, vertex_set(5))


def test_is_cds_matches_networkx(suite_graph):
    g = suite_graph
    nxg = g.to_networkx()
    for c in all_subsets(g.n):
        chosen = members_of(c)
        expected = bool(chosen) and nx.is_dominating_set(nxg, chosen) and nx.is_connected(nxg.subgraph(chosen))
        assert is_cds(g, c) == expected, chosen


def test_is_connected_examples(p5, star4):
    assert is_connected(p5)
    assert is_connected(star4)
    assert not is_connected(Graph(4, [(1, 2), (3, 4)]))


# ==========================================
# Конструирование и валидация
# ==========================================

def test_graph_basic_properties(star4):
    assert star4.n == 5
    assert star4.m == 4
    assert star4.max_degree == 4
    assert star4.neighbors(1) == [2, 3, 4, 5]
    assert star4.neighbors(3) == [1]


@pytest.mark.parametrize("edges", [
    [(1, 1)],
    [(1, 2), (2, 1)],
    [(1, 5)],
    [(0, 1)],
])
def test_invalid_edges_rejected(edges):
    with pytest.raises(GraphError):
        Graph(3, edges)


def test_validate_for_solver():
    with pytest.raises(GraphError):
        Graph(1, []).validate_for_solver()
    with pytest.raises(GraphError):
        Graph(4, [(1, 2), (3, 4)]).validate_for_solver()
    Graph(2, [(1, 2)]).validate_for_solver()


def test_adjacency_symmetric(suite_graph):
    g = suite_graph
    for v in range(1, g.n + 1):
        for w in g.neighbors(v):
            assert v in g.neighbors(w)
    assert g.max_degree == max(g.degree(v) for v in range(1, g.n + 1))


def test_vertex_set_out_of_range():
    with pytest.raises(GraphError):
        vertex_set(3, [4])


def test_networkx_conversion_relabels():
    nxg = nx.Graph([(10, 20), (20, 30)])
    g = Graph.from_networkx(nxg)
    assert g.edges == ((1, 2), (2, 3))
    assert set(g.to_networkx().edges()) == {(1, 2), (2, 3)}


# ==========================================
# Текстовый формат
# ==========================================

def test_parse_with_comments():
    g = parse_graph("# path\n3 2\n1 2\n\n# mid\n2 3\n")
    assert g.n == 3
    assert g.edges == ((1, 2), (2, 3))


@pytest.mark.parametrize("text", [
    "",
    "3 2\n1 2\n",
    "3 1\n1 x\n",
    "3 1\n1 2 3\n",
    "3 2\n1 2\n1 2\n",
    "3 1\n3 3\n",
])
def test_parse_errors(text):
    with pytest.raises(GraphError):
        parse_graph(text)


def test_write_then_read(tmp_path, star4):
    path = tmp_path / "star.txt"
    write_graph(star4, path, comment="star K_{1,4}")
    text = path.read_text()
    assert text.startswith("# star K_{1,4}\n5 4\n")
    assert read_graph(path) == star4


def test_format_edges_sorted():
    g = Graph(4, [(4, 3), (2, 1), (1, 3)])
    assert format_graph(g) == "4 3\n1 2\n1 3\n3 4\n"


def test_graph_pickles(star4):
    import pickle

    clone = pickle.loads(pickle.dumps(star4))
    assert clone == star4
    assert clone.max_degree == 4
    assert component_count_closed(clone, vertex_set(5, [1])) == 1
