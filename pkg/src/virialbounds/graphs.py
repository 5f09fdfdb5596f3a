"""Labeled graphs on vertex set {0, ..., n-1} as edge bitsets.

Edges of the complete graph K_n are indexed lexicographically:
(0,1), (0,2), ..., (0,n-1), (1,2), ...  A graph is an integer bitmask over
those n(n-1)/2 slots, so subgraph tests are bitmask containment.  Exhaustive
graph scans are capped at n = 6 (32768 subsets) and tree streams at n = 8.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator

from .errors import CapacityError

__all__ = [
    "MAX_GRAPH_VERTICES",
    "MAX_TREE_VERTICES",
    "num_edges",
    "edge_pairs",
    "edge_index",
    "LabeledGraph",
    "LabeledTree",
    "EdgeOrder",
    "build_edge_order",
    "enumerate_connected",
    "enumerate_trees",
    "connected_graph_masks",
    "tree_edge_sets",
    "kruskal_min_tree",
    "scheme_map",
    "verify_partition",
    "PartitionReport",
]

MAX_GRAPH_VERTICES = 6
MAX_TREE_VERTICES = 8


def num_edges(n: int) -> int:
    return n * (n - 1) // 2


@lru_cache(maxsize=None)
def edge_pairs(n: int) -> tuple[tuple[int, int], ...]:
    return tuple((i, j) for i in range(n - 1) for j in range(i + 1, n))


@lru_cache(maxsize=None)
def _edge_index_table(n: int) -> dict[tuple[int, int], int]:
    return {pair: k for k, pair in enumerate(edge_pairs(n))}


def edge_index(n: int, i: int, j: int) -> int:
    if i == j:
        raise ValueError("self-loops have no edge index")
    if i > j:
        i, j = j, i
    return _edge_index_table(n)[(i, j)]


@dataclass(frozen=True)
class LabeledGraph:
    n: int
    mask: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("need at least one vertex")
        if not 0 <= self.mask < (1 << num_edges(self.n)):
            raise ValueError(f"edge mask out of range for n={self.n}")

    @classmethod
    def from_edges(cls, n: int, edges) -> "LabeledGraph":
        mask = 0
        for i, j in edges:
            mask |= 1 << edge_index(n, i, j)
        return cls(n, mask)

    @classmethod
    def complete(cls, n: int) -> "LabeledGraph":
        return cls(n, (1 << num_edges(n)) - 1)

    @property
    def edge_count(self) -> int:
        return self.mask.bit_count()

    def edges(self) -> list[tuple[int, int]]:
        pairs = edge_pairs(self.n)
        return [pairs[k] for k in _iter_bits(self.mask)]

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.mask >> edge_index(self.n, i, j) & 1)

    def is_subgraph_of(self, other: "LabeledGraph") -> bool:
        return self.n == other.n and self.mask & ~other.mask == 0

    def is_connected(self) -> bool:
        return _mask_connected(self.n, self.mask)


@dataclass(frozen=True)
class LabeledTree(LabeledGraph):
    def __post_init__(self) -> None:
        super().__post_init__()
        if self.edge_count != self.n - 1:
            raise ValueError(f"a tree on {self.n} vertices has {self.n - 1} edges")
        if not self.is_connected():
            raise ValueError("tree must span all vertices")
        if _has_cycle(self.n, self.mask):
            raise ValueError("tree must be acyclic")


def _iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _mask_connected(n: int, mask: int) -> bool:
    if n == 1:
        return True
    adj = [0] * n
    for k in _iter_bits(mask):
        i, j = edge_pairs(n)[k]
        adj[i] |= 1 << j
        adj[j] |= 1 << i
    seen = 1
    frontier = [0]
    while frontier:
        u = frontier.pop()
        new = adj[u] & ~seen
        seen |= new
        frontier.extend(_iter_bits(new))
    return seen == (1 << n) - 1


def _has_cycle(n: int, mask: int) -> bool:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for k in _iter_bits(mask):
        i, j = edge_pairs(n)[k]
        ri, rj = find(i), find(j)
        if ri == rj:
            return True
        parent[ri] = rj
    return False


# -- enumeration --------------------------------------------------------------

@lru_cache(maxsize=None)
def connected_graph_masks(n: int) -> tuple[int, ...]:
    """Masks of all connected spanning subgraphs of K_n, ascending (n <= 6)."""
    if not 1 <= n <= MAX_GRAPH_VERTICES:
        raise CapacityError(
            f"exhaustive graph scans support n <= {MAX_GRAPH_VERTICES}, got {n}"
        )
    return tuple(
        mask for mask in range(1 << num_edges(n)) if _mask_connected(n, mask)
    )


def enumerate_connected(n: int) -> Iterator[LabeledGraph]:
    """Every connected graph on {0..n-1}, each exactly once."""
    for mask in connected_graph_masks(n):
        yield LabeledGraph(n, mask)


def _prufer_edges(n: int, seq: tuple[int, ...]) -> tuple[tuple[int, int], ...]:
    if n == 1:
        return ()
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    leaves = [i for i in range(n) if degree[i] == 1]
    heapq.heapify(leaves)
    edges = []
    for v in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, v) if leaf < v else (v, leaf))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaves, v)
    u = heapq.heappop(leaves)
    w = heapq.heappop(leaves)
    edges.append((u, w) if u < w else (w, u))
    return tuple(edges)


@lru_cache(maxsize=None)
def tree_edge_sets(n: int) -> tuple[tuple[int, tuple[int, ...], tuple[tuple[int, int], ...]], ...]:
    """(mask, edge indices, vertex pairs) for every labeled tree, in Prufer order."""
    if not 1 <= n <= MAX_TREE_VERTICES:
        raise CapacityError(
            f"tree enumeration supports n <= {MAX_TREE_VERTICES}, got {n}"
        )
    table = _edge_index_table(n)
    out = []
    if n <= 2:
        seqs = [()]
    else:
        seqs = product(range(n), repeat=n - 2)
    for seq in seqs:
        pairs = _prufer_edges(n, tuple(seq))
        kidx = tuple(table[p] for p in pairs)
        mask = 0
        for k in kidx:
            mask |= 1 << k
        out.append((mask, kidx, pairs))
    return tuple(out)


def enumerate_trees(n: int) -> Iterator[LabeledTree]:
    """Every labeled tree on {0..n-1} exactly once (Prufer enumeration)."""
    for mask, _, _ in tree_edge_sets(n):
        yield LabeledTree(n, mask)


# -- edge orders and the minimal-tree / interval-top maps ----------------------

@dataclass(frozen=True)
class EdgeOrder:
    """Total order on the edges of K_n: ascending weights, ties broken by index.

    rank[k] is the position of edge k, so "edge a dominates edge b" is
    rank[a] >= rank[b]; equal weights compare by the lexicographic pair.
    """

    n: int
    order: tuple[int, ...]
    rank: tuple[int, ...]


def build_edge_order(n: int, weights) -> EdgeOrder:
    """Order the edges of K_n by weight (+inf allowed, NaN rejected)."""
    weights = [float(w) for w in weights]
    m = num_edges(n)
    if len(weights) != m:
        raise ValueError(f"expected {m} weights for n={n}, got {len(weights)}")
    if any(w != w for w in weights):
        raise ValueError("edge weights must not be NaN")
    order = tuple(sorted(range(m), key=lambda k: (weights[k], k)))
    rank = [0] * m
    for pos, k in enumerate(order):
        rank[k] = pos
    return EdgeOrder(n=n, order=order, rank=tuple(rank))


def _kruskal_mask(n: int, gmask: int, order: EdgeOrder) -> int:
    pairs = edge_pairs(n)
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    mask = 0
    picked = 0
    for k in order.order:
        if not gmask >> k & 1:
            continue
        i, j = pairs[k]
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            mask |= 1 << k
            picked += 1
            if picked == n - 1:
                break
    if picked != n - 1:
        raise ValueError("graph is not connected")
    return mask


def kruskal_min_tree(g: LabeledGraph, order: EdgeOrder) -> LabeledTree:
    """Minimal spanning tree of g: add the lowest edge that closes no cycle."""
    if order.n != g.n:
        raise ValueError("edge order built for a different vertex count")
    return LabeledTree(g.n, _kruskal_mask(g.n, g.mask, order))


def _scheme_mask(
    n: int,
    tree_pairs: tuple[tuple[int, int], ...],
    tree_mask: int,
    rank: tuple[int, ...],
) -> int:
    table = _edge_index_table(n)
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for i, j in tree_pairs:
        k = table[(i, j)]
        adj[i].append((j, k))
        adj[j].append((i, k))
    # highest edge rank on the unique tree path between every vertex pair
    path_max = [[-1] * n for _ in range(n)]
    for s in range(n):
        row = path_max[s]
        seen = 1 << s
        stack = [s]
        while stack:
            u = stack.pop()
            for v, k in adj[u]:
                if not seen >> v & 1:
                    seen |= 1 << v
                    r = rank[k]
                    ru = row[u]
                    row[v] = r if r > ru else ru
                    stack.append(v)
    mask = tree_mask
    for k, (i, j) in enumerate(edge_pairs(n)):
        if mask >> k & 1:
            continue
        if rank[k] >= path_max[i][j]:
            mask |= 1 << k
    return mask


def scheme_map(tree: LabeledTree, order: EdgeOrder) -> LabeledGraph:
    """Interval top M(tree): edges dominating every tree edge on their path.

    Always contains the tree itself; together with the Kruskal map the
    Boolean intervals [tree, M(tree)] partition the connected graphs.
    """
    if order.n != tree.n:
        raise ValueError("edge order built for a different vertex count")
    pairs = tuple(tree.edges())
    return LabeledGraph(tree.n, _scheme_mask(tree.n, pairs, tree.mask, order.rank))


# -- exhaustive verification ---------------------------------------------------

@dataclass(frozen=True)
class PartitionReport:
    n: int
    passed: bool
    connected_count: int
    tree_count: int
    interval_count_sum: int
    first_counterexample: str | None = None


def verify_partition(n: int, order: EdgeOrder) -> PartitionReport:
    """Exhaustively check that the tree intervals partition the connected graphs.

    (a) every connected g satisfies T(g) <= g <= M(T(g));
    (b) every g in [tree, M(tree)] maps back to that tree under Kruskal;
    (c) sum over trees of 2^(|M(tree)| - (n-1)) equals the number of
        connected graphs.
    Failures are reported, not raised.
    """
    if not 2 <= n <= MAX_GRAPH_VERTICES:
        raise CapacityError(
            f"verify_partition supports 2 <= n <= {MAX_GRAPH_VERTICES}, got {n}"
        )
    if order.n != n:
        raise ValueError("edge order built for a different vertex count")
    conn = connected_graph_masks(n)
    trees = tree_edge_sets(n)
    tops = {mask: _scheme_mask(n, pairs, mask, order.rank) for mask, _, pairs in trees}

    for gmask in conn:
        tmask = _kruskal_mask(n, gmask, order)
        top = tops[tmask]
        if tmask & ~gmask or gmask & ~top:
            return PartitionReport(
                n, False, len(conn), len(trees), 0,
                f"graph {gmask:#x}: tree {tmask:#x} interval [tree, {top:#x}] misses it",
            )

    interval_sum = 0
    for tmask, _, _ in trees:
        top = tops[tmask]
        extra = list(_iter_bits(top & ~tmask))
        interval_sum += 1 << len(extra)
        for choice in range(1 << len(extra)):
            gmask = tmask
            for pos, k in enumerate(extra):
                if choice >> pos & 1:
                    gmask |= 1 << k
            back = _kruskal_mask(n, gmask, order)
            if back != tmask:
                return PartitionReport(
                    n, False, len(conn), len(trees), interval_sum,
                    f"graph {gmask:#x} in interval of tree {tmask:#x} maps to {back:#x}",
                )

    if interval_sum != len(conn):
        return PartitionReport(
            n, False, len(conn), len(trees), interval_sum,
            f"interval sizes sum to {interval_sum}, expected {len(conn)}",
        )
    return PartitionReport(n, True, len(conn), len(trees), interval_sum)
