"""
Общий набор графов для тестов (n <= 10): пути, циклы, звёзды, K_{2,3}, K4,
граф Петерсена, 20 случайных связных ER и пара BA.

Тест с аргументом suite_graph параметризуется всем набором,
small_suite_graph - графами с n <= 8 (перебор 3^n пар подмножеств).
"""

import networkx as nx
import pytest

from generators import GenSpec, generate
from graph_core import (
    Graph,
    complete_bipartite_graph,
    complete_graph,
    cycle_graph,
    path_graph,
    star_graph,
)


def _suite():
    graphs = [
        ("P2", path_graph(2)),
        ("P5", path_graph(5)),
        ("P8", path_graph(8)),
        ("P10", path_graph(10)),
        ("C4", cycle_graph(4)),
        ("C5", cycle_graph(5)),
        ("C6", cycle_graph(6)),
        ("C9", cycle_graph(9)),
        ("K1_3", star_graph(3)),
        ("K1_4", star_graph(4)),
        ("K1_7", star_graph(7)),
        ("K2_3", complete_bipartite_graph(2, 3)),
        ("K4", complete_graph(4)),
        ("Petersen", Graph.from_networkx(nx.petersen_graph())),
        ("BA8", generate(GenSpec(model="ba", n=8, seed=3))),
        ("BA10", generate(GenSpec(model="ba", n=10, seed=5))),
    ]
    for k in range(20):
        n = 6 + k % 5
        graphs.append((f"ER{n}-s{k}", generate(GenSpec(model="er", n=n, seed=k, er_p=0.35))))
    return graphs


SUITE = _suite()


def pytest_generate_tests(metafunc):
    if "suite_graph" in metafunc.fixturenames:
        metafunc.parametrize("suite_graph", [g for _, g in SUITE], ids=[name for name, _ in SUITE])
    if "small_suite_graph" in metafunc.fixturenames:
        small = [(name, g) for name, g in SUITE if g.n <= 8]
        metafunc.parametrize("small_suite_graph", [g for _, g in small], ids=[name for name, _ in small])


@pytest.fixture
def p5():
    return path_graph(5)


@pytest.fixture
def star4():
    return star_graph(4)
