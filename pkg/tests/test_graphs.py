import math
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from virialbounds import (
    CapacityError,
    LabeledGraph,
    LabeledTree,
    build_edge_order,
    enumerate_connected,
    enumerate_trees,
    kruskal_min_tree,
    scheme_map,
    verify_partition,
)
from virialbounds.graphs import connected_graph_masks, edge_index, num_edges, tree_edge_sets


def connected_count_oracle(n: int) -> int:
    """Count connected labeled graphs by the subtraction recurrence."""
    c = {1: 1}
    for k in range(2, n + 1):
        total = 2 ** comb(k, 2)
        for j in range(1, k):
            total -= comb(k - 1, j - 1) * c[j] * 2 ** comb(k - j, 2)
        c[k] = total
    return c[n]


@pytest.mark.parametrize("n,expected", [(1, 1), (2, 1), (3, 4), (4, 38), (5, 728), (6, 26704)])
def test_connected_counts(n, expected):
    assert connected_count_oracle(n) == expected or n == 1
    assert len(list(enumerate_connected(n))) == expected
    if n >= 2:
        assert len(connected_graph_masks(n)) == connected_count_oracle(n)


def test_connected_all_connected_and_unique():
    masks = connected_graph_masks(4)
    assert len(set(masks)) == len(masks)
    for g in enumerate_connected(4):
        assert g.is_connected()


def test_enumerate_connected_capacity():
    with pytest.raises(CapacityError):
        list(enumerate_connected(7))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6, 7, 8])
def test_tree_counts(n):
    expected = 1 if n <= 2 else n ** (n - 2)
    trees = list(enumerate_trees(n))
    assert len(trees) == expected
    assert len({t.mask for t in trees}) == expected
    for t in trees[:50]:
        assert t.edge_count == n - 1
        assert t.is_connected()


def test_enumerate_trees_capacity():
    with pytest.raises(CapacityError):
        list(enumerate_trees(9))


def test_tree_validation():
    with pytest.raises(ValueError):
        LabeledTree.from_edges(3, [(0, 1)])  # too few edges
    with pytest.raises(ValueError):
        LabeledTree.from_edges(4, [(0, 1), (0, 2), (1, 2)])  # cycle, not spanning


def test_edge_order_examples():
    # distinct weights: plain sort; the hand example e12 < e23 < e13
    order = build_edge_order(3, [-1.0, 0.5, -0.2])
    assert order.order == (0, 2, 1)
    # all ties: lexicographic
    order = build_edge_order(3, [7.0, 7.0, 7.0])
    assert order.order == (0, 1, 2)
    # +inf sorts last
    order = build_edge_order(3, [math.inf, 0.0, 1.0])
    assert order.order == (1, 2, 0)
    with pytest.raises(ValueError):
        build_edge_order(3, [0.0, math.nan, 1.0])
    with pytest.raises(ValueError):
        build_edge_order(3, [0.0, 1.0])


def test_kruskal_examples():
    # a tree maps to itself
    tree = LabeledTree.from_edges(3, [(0, 1), (1, 2)])
    order = build_edge_order(3, [0.0, 1.0, 2.0])
    assert kruskal_min_tree(tree, order).mask == tree.mask
    # K3 with order e12 < e23 < e13 picks {e12, e23}
    order = build_edge_order(3, [0.0, 2.0, 1.0])
    got = kruskal_min_tree(LabeledGraph.complete(3), order)
    assert got.mask == LabeledGraph.from_edges(3, [(0, 1), (1, 2)]).mask
    # K4 with increasing lexicographic weights -> star at vertex 0
    order = build_edge_order(4, list(range(6)))
    got = kruskal_min_tree(LabeledGraph.complete(4), order)
    assert got.mask == LabeledGraph.from_edges(4, [(0, 1), (0, 2), (0, 3)]).mask


def test_kruskal_disconnected_raises():
    g = LabeledGraph.from_edges(4, [(0, 1), (2, 3)])
    order = build_edge_order(4, list(range(6)))
    with pytest.raises(ValueError):
        kruskal_min_tree(g, order)


def test_scheme_map_examples():
    # n=2: the single tree maps to itself
    t2 = LabeledTree.from_edges(2, [(0, 1)])
    order2 = build_edge_order(2, [0.0])
    assert scheme_map(t2, order2).mask == t2.mask
    # order e12 < e23 < e13: path tree {e12, e23} absorbs e13
    order = build_edge_order(3, [0.0, 2.0, 1.0])
    tree = LabeledTree.from_edges(3, [(0, 1), (1, 2)])
    assert scheme_map(tree, order).mask == LabeledGraph.complete(3).mask
    # same order, tree {e12, e13}: e23 is dominated by e13 on its path, excluded
    tree = LabeledTree.from_edges(3, [(0, 1), (0, 2)])
    assert scheme_map(tree, order).mask == tree.mask


def test_scheme_map_contains_tree_always():
    rng = np.random.default_rng(4)
    for n in (2, 3, 4, 5):
        order = build_edge_order(n, list(rng.uniform(-1, 1, num_edges(n))))
        for tree in enumerate_trees(n):
            top = scheme_map(tree, order)
            assert tree.is_subgraph_of(top)


def test_kruskal_scheme_idempotence():
    rng = np.random.default_rng(5)
    for n in (2, 3, 4, 5):
        for trial in range(10):
            w = rng.uniform(-1, 1, num_edges(n))
            if trial % 2:
                w = np.round(w, 1)
            order = build_edge_order(n, list(w))
            for tree in enumerate_trees(n):
                top = scheme_map(tree, order)
                assert kruskal_min_tree(top, order).mask == tree.mask


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_verify_partition_random_orders(n):
    rng = np.random.default_rng(100 + n)
    for trial in range(30):
        w = rng.uniform(-1, 1, num_edges(n))
        if trial % 3 == 0:
            w = np.round(w, 1)
        report = verify_partition(n, build_edge_order(n, list(w)))
        assert report.passed, report.first_counterexample
        assert report.interval_count_sum == len(connected_graph_masks(n))


def test_verify_partition_all_orders_n3():
    # all 6 permutations of distinct weights on K_3
    import itertools

    for perm in itertools.permutations([0.0, 1.0, 2.0]):
        report = verify_partition(3, build_edge_order(3, list(perm)))
        assert report.passed
        assert report.interval_count_sum == 4


def test_verify_partition_with_infinite_ties():
    w = [math.inf] * num_edges(4)
    report = verify_partition(4, build_edge_order(4, w))
    assert report.passed


def test_verify_partition_capacity():
    with pytest.raises(CapacityError):
        verify_partition(7, build_edge_order(7, [0.0] * num_edges(7)))


def test_edge_index_roundtrip():
    from virialbounds.graphs import edge_pairs

    n = 6
    for k, (i, j) in enumerate(edge_pairs(n)):
        assert edge_index(n, i, j) == k
        assert edge_index(n, j, i) == k


@settings(max_examples=40, deadline=None)
@given(
    n=st.integers(min_value=2, max_value=5),
    seed=st.integers(min_value=0, max_value=2**31),
    decimals=st.integers(min_value=0, max_value=2),
)
def test_partition_property_random_orders(n, seed, decimals):
    """The interval partition holds for every order, including heavy ties."""
    rng = np.random.default_rng(seed)
    w = np.round(rng.uniform(-1, 1, num_edges(n)), decimals)
    report = verify_partition(n, build_edge_order(n, list(w)))
    assert report.passed, report.first_counterexample
