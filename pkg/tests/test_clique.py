from collections import Counter
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rsnc.clique import max_weight_clique_exact, max_weight_clique_heuristic
from rsnc.graph import CodingGraph, build_graph
from rsnc.model import InstanceTooLarge


def make_graph(adj, weights):
    adj = np.asarray(adj, dtype=bool)
    adj = adj | adj.T
    np.fill_diagonal(adj, False)
    n = len(weights)
    verts = tuple((k, k) for k in range(n))
    ones = np.ones(n)
    return CodingGraph(verts, np.asarray(weights, dtype=float), ones, ones, adj)


@st.composite
def graphs(draw, max_n=9):
    n = draw(st.integers(0, max_n))
    bits = draw(st.lists(st.booleans(), min_size=n * n, max_size=n * n))
    w = draw(st.lists(st.floats(0.1, 5.0, allow_nan=False), min_size=n, max_size=n))
    adj = np.array(bits, dtype=bool).reshape(n, n) if n else np.zeros((0, 0), dtype=bool)
    return make_graph(np.triu(adj, 1), w)


def brute_best_weight(g):
    best = 0.0
    for size in range(1, len(g) + 1):
        for q in combinations(g.vertices, size):
            if g.is_clique(q):
                best = max(best, sum(g.weights()[v] for v in q))
    return best


def total(g, q):
    return sum(g.weights()[v] for v in q)


def test_trio_graph_heuristic_and_exact(trio):
    g = build_graph(trio)
    assert max_weight_clique_heuristic(g.full()) == {(1, 1), (2, 2)}
    assert max_weight_clique_exact(g.full()) == {(1, 1), (2, 2)}


def test_edgeless_gives_heaviest_singleton():
    g = make_graph(np.zeros((3, 3)), [1.0, 3.0, 2.0])
    assert max_weight_clique_heuristic(g.full()) == {(1, 1)}
    assert max_weight_clique_exact(g.full()) == {(1, 1)}


def test_complete_graph_gives_everything():
    g = make_graph(np.ones((5, 5)), [1.0] * 5)
    assert max_weight_clique_heuristic(g.full()) == set(g.vertices)


def test_empty_and_single():
    g = make_graph(np.zeros((0, 0)), [])
    assert max_weight_clique_heuristic(g.full()) == frozenset()
    assert max_weight_clique_exact(g.full()) == frozenset()
    g1 = make_graph(np.zeros((1, 1)), [2.0])
    assert max_weight_clique_exact(g1.full()) == {(0, 0)}


def test_exact_tie_goes_to_lexicographically_smallest():
    # two disjoint edges with equal weight
    adj = np.zeros((4, 4))
    adj[0, 1] = adj[2, 3] = 1
    g = make_graph(adj, [1.0, 1.0, 1.0, 1.0])
    assert max_weight_clique_exact(g.full()) == {(0, 0), (1, 1)}


def test_exact_limit():
    g = make_graph(np.zeros((21, 21)), [1.0] * 21)
    with pytest.raises(InstanceTooLarge):
        max_weight_clique_exact(g.full())
    assert len(max_weight_clique_exact(g.full(), vertex_limit=21)) == 1


def test_subgraph_restriction():
    g = make_graph(np.ones((4, 4)), [1.0, 1.0, 1.0, 1.0])
    sub = g.subgraph(lambda v: v[0] % 2 == 0)
    assert max_weight_clique_heuristic(sub) == {(0, 0), (2, 2)}


def test_work_counter_accumulates():
    g = make_graph(np.ones((6, 6)), [1.0] * 6)
    work = Counter()
    max_weight_clique_heuristic(g.full(), work)
    assert work["clique_ops"] > 0


@settings(max_examples=300, deadline=None)
@given(graphs())
def test_heuristic_is_maximal_clique_no_heavier_than_exact(g):
    q = max_weight_clique_heuristic(g.full())
    if len(g) == 0:
        assert q == frozenset()
        return
    assert g.is_clique(q)
    for v in set(g.vertices) - q:
        assert not g.is_clique(q | {v})
    exact = max_weight_clique_exact(g.full())
    assert g.is_clique(exact)
    assert total(g, q) <= total(g, exact) + 1e-9
    assert total(g, exact) == pytest.approx(brute_best_weight(g))


@settings(max_examples=50, deadline=None)
@given(graphs())
def test_heuristic_deterministic(g):
    assert max_weight_clique_heuristic(g.full()) == max_weight_clique_heuristic(g.full())
