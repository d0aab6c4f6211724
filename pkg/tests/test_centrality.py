import itertools

import numpy as np
import pytest

from rang.centrality import (
    UNIT,
    WEIGHTED,
    betweenness,
    centrality_rows,
    detect_leaders,
    rank,
    relative_betweenness,
)
from rang.community import UndirectedGraph

from oracles import brute_betweenness


def graph(nodes, edges):
    return UndirectedGraph.from_edges(nodes, edges)


def star():
    return graph(["c", 1, 2, 3, 4], [("c", i, 1) for i in range(1, 5)])


@pytest.mark.parametrize("mode", [WEIGHTED, UNIT])
def test_star(mode):
    b = betweenness(star(), mode)
    assert b["c"] == 6 and all(b[i] == 0 for i in range(1, 5))
    assert relative_betweenness(star(), mode)["c"] == 1.0


def test_path():
    assert betweenness(graph("abc", [("a", "b", 1), ("b", "c", 1)]))["b"] == 1


def test_triangle():
    assert set(betweenness(graph([1, 2, 3], [(1, 2, 1), (2, 3, 1), (1, 3, 1)])).values()) == {0}


def test_weights_change_paths():
    # heavy two-hop detour 1-2-3 is shorter (1/5 + 1/5) than the direct light edge 1-3
    g = graph([1, 2, 3], [(1, 2, 5), (2, 3, 5), (1, 3, 1)])
    assert betweenness(g, WEIGHTED)[2] == 1
    assert betweenness(g, UNIT)[2] == 0


def test_small_graphs_are_zero():
    assert relative_betweenness(graph([1, 2], [(1, 2, 1)])) == {1: 0.0, 2: 0.0}


def random_graph(r, n):
    nodes = list(range(n))
    p = r.uniform(0.2, 0.7)
    edges = [(u, v, int(r.integers(1, 6))) for u, v in itertools.combinations(nodes, 2) if r.random() < p]
    return nodes, edges


@pytest.mark.parametrize("seed", range(25))
def test_brandes_equals_enumeration(seed):
    r = np.random.default_rng(seed)
    nodes, edges = random_graph(r, int(r.integers(3, 13)))
    g = graph(nodes, edges)
    for mode, weighted in ((UNIT, False), (WEIGHTED, True)):
        got = betweenness(g, mode)
        want = brute_betweenness(nodes, edges, weighted)
        for u in nodes:
            assert got[u] == pytest.approx(want[u], abs=1e-9)


@pytest.mark.parametrize("seed", range(10))
def test_rbc_range_and_scaling(seed):
    r = np.random.default_rng(100 + seed)
    nodes, edges = random_graph(r, 12)
    g = graph(nodes, edges)
    rbc = relative_betweenness(g)
    assert all(0.0 <= x <= 1.0 for x in rbc.values())
    scaled = graph(nodes, [(u, v, 3 * w) for u, v, w in edges])
    assert rank(relative_betweenness(scaled)) == rank(rbc)


def test_leaders_of_star():
    assert detect_leaders(star(), 1) == {"c"}


def test_cycle_ties_return_everyone():
    cycle = graph(range(6), [(i, (i + 1) % 6, 1) for i in range(6)])
    assert detect_leaders(cycle, 2) == set(range(6))


def test_leader_threshold_rule():
    # path 1-2-3-4-5: rbc(3) = 4/6, rbc(2) = rbc(4) = 3/6
    g = graph([1, 2, 3, 4, 5], [(i, i + 1, 1) for i in range(1, 5)])
    assert detect_leaders(g, 1) == {3}
    assert detect_leaders(g, 2) == {2, 3, 4}
    with pytest.raises(ValueError):
        detect_leaders(g, 6)


def test_rows_are_ranked():
    rows = centrality_rows(star())
    assert rows[0][0] == "c" and rows[0][3] == 1
    assert [r[3] for r in rows] == [1, 2, 3, 4, 5]
