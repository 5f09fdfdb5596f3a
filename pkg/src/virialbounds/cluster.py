"""Cluster sums over point configurations.

The central identity: the sum over connected graphs of products of Mayer
factors equals a sum over spanning trees in which the non-tree edges of each
tree's interval top contribute an exponential reweighting.  Both sides are
implemented independently (ursell_direct / penrose_tree_sum) and must agree
to floating-point accuracy; everything downstream leans on that agreement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CapacityError, UnsupportedPotentialError
from .graphs import (
    MAX_GRAPH_VERTICES,
    MAX_TREE_VERTICES,
    EdgeOrder,
    LabeledTree,
    _iter_bits,
    _scheme_mask,
    build_edge_order,
    connected_graph_masks,
    edge_pairs,
    num_edges,
    tree_edge_sets,
)
from .potentials import PairPotential
from .util import ordered_map, spawned_rng

__all__ = [
    "Configuration",
    "Box",
    "MayerEstimate",
    "pair_distances",
    "pair_energy_sum",
    "ursell_direct",
    "penrose_tree_sum",
    "scheme_stability_gap",
    "scheme_stability_gap_min",
    "mayer_coefficient_mc",
    "bound_penrose_ruelle",
    "bound_tree_stability",
    "bound_tree_basuev",
]


@dataclass(frozen=True, eq=False)
class Configuration:
    """An ordered list of n points in d-dimensional space (rows of `points`)."""

    points: np.ndarray

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[0] < 1:
            raise ValueError("points must be a (n, d) array with n >= 1")
        if not np.all(np.isfinite(pts)):
            raise ValueError("coordinates must be finite")
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dimension(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True)
class Box:
    """Centered cube [-side/2, side/2]^dimension."""

    side: float
    dimension: int

    def __post_init__(self) -> None:
        if not self.side > 0.0:
            raise ValueError("box side must be positive")
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")

    @property
    def volume(self) -> float:
        return self.side ** self.dimension


@dataclass(frozen=True)
class MayerEstimate:
    n: int
    beta: float
    box: Box
    estimate: float
    std_error: float
    samples: int

    def __post_init__(self) -> None:
        if self.std_error < 0.0:
            raise ValueError("standard error must be nonnegative")
        if self.samples < 1:
            raise ValueError("sample count must be >= 1")


def pair_distances(config: Configuration) -> np.ndarray:
    """Distances |x_i - x_j| for i < j in lexicographic edge order."""
    iu, ju = np.triu_indices(config.n, 1)
    diff = config.points[iu] - config.points[ju]
    return np.sqrt(np.sum(diff * diff, axis=1))


def pair_energy_sum(p: PairPotential, config: Configuration) -> float:
    """Total pair energy U = sum_{i<j} V(|x_i - x_j|); +inf on core overlap."""
    if config.n == 1:
        return 0.0
    v = p.evaluate_many(pair_distances(config))
    if np.isinf(v).any():
        return math.inf
    return math.fsum(v.tolist())


@lru_cache(maxsize=None)
def _connected_indices(n: int) -> np.ndarray:
    return np.array(connected_graph_masks(n), dtype=np.int64)


def _subset_products(f: np.ndarray) -> np.ndarray:
    """products[mask] = prod of f[k] over the set bits of mask, for all masks."""
    prod = np.ones(1)
    for x in f:
        prod = np.concatenate([prod, prod * x])
    return prod


def ursell_direct(p: PairPotential, beta: float, config: Configuration) -> float:
    """Sum over connected graphs of the product of edge Mayer factors.

    Terms alternate in sign and nearly cancel, so the final reduction uses
    exactly-rounded summation (math.fsum).
    """
    n = config.n
    if n > MAX_GRAPH_VERTICES:
        raise CapacityError(f"direct graph sum supports n <= {MAX_GRAPH_VERTICES}")
    if n == 1:
        return 1.0
    f = p.mayer_f_many(beta, pair_distances(config))
    products = _subset_products(f)
    return math.fsum(products[_connected_indices(n)].tolist())


def penrose_tree_sum(
    p: PairPotential,
    beta: float,
    config: Configuration,
    order: EdgeOrder | None = None,
) -> float:
    """Tree-sum form of the connected-graph sum (Penrose identity).

    Each labeled tree contributes exp(-beta * sum of V over the non-tree
    edges of its interval top) times the product of Mayer factors over its
    own edges.  The edge order defaults to the one induced by the pair
    energies of `config`; any order compatible with the energies gives the
    same total.  A +inf energy on a reweighting edge kills that term exactly
    (the factor e^{-beta*inf} = 0 is applied before any arithmetic).
    """
    n = config.n
    if n > MAX_TREE_VERTICES:
        raise CapacityError(f"tree sum supports n <= {MAX_TREE_VERTICES}")
    if n == 1:
        return 1.0
    weights = [float(v) for v in p.evaluate_many(pair_distances(config))]
    if order is None:
        order = build_edge_order(n, weights)
    elif order.n != n:
        raise ValueError("edge order built for a different vertex count")
    rank = order.rank
    terms = []
    for mask, kidx, pairs in tree_edge_sets(n):
        top = _scheme_mask(n, pairs, mask, rank)
        reweight = 0.0
        dead = False
        for k in _iter_bits(top & ~mask):
            w = weights[k]
            if w == math.inf:
                dead = True
                break
            reweight += w
        if dead:
            continue
        prod = 1.0
        for k in kidx:
            prod *= math.expm1(-beta * weights[k])
        terms.append(math.exp(-beta * reweight) * prod)
    return math.fsum(terms)


def scheme_stability_gap(
    p: PairPotential,
    config: Configuration,
    tree: LabeledTree,
    order: EdgeOrder | None = None,
) -> float:
    """Slack in the stability bound for one tree's interval top.

    Returns sum of V over the top's edges minus the tree edges with V >= 0,
    plus Bbar*(n-1).  Nonnegativity of the result is the per-tree stability
    inequality; it stays valid when the stored Bbar is an upper bound.
    """
    if p.known_bbar is None:
        raise UnsupportedPotentialError(
            f"potential {p.name!r} has no known_bbar; the gap needs one"
        )
    n = config.n
    if tree.n != n:
        raise ValueError("tree and configuration sizes differ")
    weights = [float(v) for v in p.evaluate_many(pair_distances(config))]
    if order is None:
        order = build_edge_order(n, weights)
    pairs = tuple(tree.edges())
    top = _scheme_mask(n, pairs, tree.mask, order.rank)
    nonneg_tree_edges = 0
    for k in _iter_bits(tree.mask):
        if weights[k] >= 0.0:
            nonneg_tree_edges |= 1 << k
    total = 0.0
    for k in _iter_bits(top & ~nonneg_tree_edges):
        w = weights[k]
        if w == math.inf:
            return math.inf
        total += w
    return total + p.known_bbar * (n - 1)


def scheme_stability_gap_min(p: PairPotential, config: Configuration) -> float:
    """Minimum of scheme_stability_gap over every labeled tree of one configuration.

    Shares the pair energies and the induced edge order across trees, so it
    is the cheap way to scan all trees.
    """
    if p.known_bbar is None:
        raise UnsupportedPotentialError(
            f"potential {p.name!r} has no known_bbar; the gap needs one"
        )
    n = config.n
    if n > MAX_TREE_VERTICES:
        raise CapacityError(f"tree scans support n <= {MAX_TREE_VERTICES}")
    if n == 1:
        return math.inf
    weights = [float(v) for v in p.evaluate_many(pair_distances(config))]
    order = build_edge_order(n, weights)
    offset = p.known_bbar * (n - 1)
    best = math.inf
    for mask, _, pairs in tree_edge_sets(n):
        top = _scheme_mask(n, pairs, mask, order.rank)
        nonneg = 0
        for k in _iter_bits(mask):
            if weights[k] >= 0.0:
                nonneg |= 1 << k
        total = 0.0
        for k in _iter_bits(top & ~nonneg):
            w = weights[k]
            if w == math.inf:
                total = math.inf
                break
            total += w
        best = min(best, total + offset)
    return best


# -- Monte Carlo coefficient estimation ----------------------------------------

def mayer_coefficient_mc(
    p: PairPotential,
    beta: float,
    n: int,
    box: Box,
    samples: int,
    seed: int = 0,
    workers: int = 1,
) -> MayerEstimate:
    """Plain Monte Carlo estimate of the n-th Mayer coefficient over `box`.

    All n points are drawn uniformly in the box; the connected-graph sum is
    averaged and scaled by volume^(n-1)/n!.  Sampling is split into fixed
    blocks seeded by (seed, block_index), and block partial sums are reduced
    in block order, so the result is bit-identical for any worker count.
    """
    if n > MAX_GRAPH_VERTICES:
        raise CapacityError(f"Monte Carlo coefficients support n <= {MAX_GRAPH_VERTICES}")
    if n < 2:
        raise ValueError("coefficient estimation needs n >= 2")
    if samples < 2:
        raise ValueError("need at least two samples")
    if box.dimension != p.dimension:
        raise ValueError("box dimension must match the potential dimension")
    m = num_edges(n)
    block = max(32, min(4096, (1 << 22) >> m))
    nblocks = (samples + block - 1) // block
    iu, ju = np.triu_indices(n, 1)
    conn = _connected_indices(n)
    half = 0.5 * box.side

    def run_block(b: int) -> tuple[float, float, int]:
        size = min(block, samples - b * block)
        rng = spawned_rng(seed, b)
        pts = rng.uniform(-half, half, size=(size, n, box.dimension))
        diff = pts[:, iu, :] - pts[:, ju, :]
        r = np.sqrt(np.sum(diff * diff, axis=2))
        f = p.mayer_f_many(beta, r)
        prod = np.ones((size, 1))
        for k in range(m):
            prod = np.concatenate([prod, prod * f[:, k : k + 1]], axis=1)
        vals = prod[:, conn].sum(axis=1)
        return (
            math.fsum(vals.tolist()),
            math.fsum((vals * vals).tolist()),
            size,
        )

    parts = ordered_map(run_block, range(nblocks), workers)
    total = math.fsum(s for s, _, _ in parts)
    total_sq = math.fsum(q for _, q, _ in parts)
    count = sum(c for _, _, c in parts)
    mean = total / count
    var = max(0.0, (total_sq - count * mean * mean) / (count - 1))
    sem = math.sqrt(var / count)
    scale = box.volume ** (n - 1) / math.factorial(n)
    return MayerEstimate(
        n=n,
        beta=beta,
        box=box,
        estimate=mean * scale,
        std_error=sem * scale,
        samples=count,
    )


# -- coefficient bounds ---------------------------------------------------------

def _tree_count_over_factorial(n: int) -> float:
    # n^(n-2)/n! as an exactly-rounded float; log-domain above the float range
    if n <= 300:
        return n ** (n - 2) / math.factorial(n)
    return math.exp((n - 2) * math.log(n) - math.lgamma(n + 1))


def _check_bound_args(n: int, beta: float, const: float, integral: float) -> None:
    if n < 1:
        raise ValueError("coefficient order must be >= 1")
    if beta < 0.0 or const < 0.0 or integral < 0.0:
        raise ValueError("bound arguments must be nonnegative")


def bound_penrose_ruelle(n: int, beta: float, b: float, c_value: float) -> float:
    """Classical coefficient bound: e^{2 beta B (n-2)} n^{n-2}/n! C^{n-1}."""
    _check_bound_args(n, beta, b, c_value)
    if n == 1:
        return 1.0
    return math.exp(2.0 * beta * b * (n - 2)) * _tree_count_over_factorial(n) * c_value ** (n - 1)


def bound_tree_stability(n: int, beta: float, b: float, ctilde: float) -> float:
    """Tree-sum coefficient bound via B: e^{beta B n} n^{n-2}/n! Ctilde^{n-1}."""
    _check_bound_args(n, beta, b, ctilde)
    if n == 1:
        return 1.0
    return math.exp(beta * b * n) * _tree_count_over_factorial(n) * ctilde ** (n - 1)


def bound_tree_basuev(n: int, beta: float, bbar: float, ctilde: float) -> float:
    """Tree-sum coefficient bound via Bbar: e^{beta Bbar (n-1)} n^{n-2}/n! Ctilde^{n-1}."""
    _check_bound_args(n, beta, bbar, ctilde)
    if n == 1:
        return 1.0
    return math.exp(beta * bbar * (n - 1)) * _tree_count_over_factorial(n) * ctilde ** (n - 1)
