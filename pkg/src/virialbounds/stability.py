"""Stability-constant estimation and witness configurations.

B_n = sup(-U/n) and Bbar_n = sup(-U/(n-1)) over n-point configurations are
estimated by multi-start local minimisation of the pair energy.  Estimates
are lower bounds only: maximisation can undershoot but never overshoot, and
seeded witness configurations (regular simplex, close-packed lattice patch,
a dispersed line) put a floor under the optimizer.  Radius formulas must use
catalog constants, never optimizer output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .cluster import Configuration, pair_energy_sum
from .potentials import PairPotential
from .util import ordered_map, spawned_rng

__all__ = [
    "StabilityEstimate",
    "StabilityCheckReport",
    "estimate_stability",
    "simplex_configuration",
    "close_packed_patch",
    "coordination_number",
    "unit_distance_pair_count",
    "check_stability_inequalities",
]


@dataclass(frozen=True, eq=False)
class StabilityEstimate:
    """Lower bounds for B_n and Bbar_n; both come from the same best energy."""

    n: int
    dimension: int
    b_n: float
    bbar_n: float
    best_energy: float
    best_configuration: Configuration
    starts: int
    seed: int


def simplex_configuration(dimension: int, side: float = 1.0) -> Configuration:
    """Regular simplex: d+1 points in R^d with every pairwise distance = side.

    Built from the scaled standard basis of R^{d+1} projected isometrically
    onto the hyperplane of zero coordinate sum; distances are exact up to
    rounding (well under 1e-12 relative).
    """
    if dimension < 1:
        raise ValueError("dimension must be >= 1")
    if not side > 0.0:
        raise ValueError("side must be positive")
    n = dimension + 1
    verts = (side / math.sqrt(2.0)) * np.eye(n)
    verts -= verts.mean(axis=0)
    span = np.eye(n)[:, :-1] - np.eye(n)[:, 1:]
    basis, _ = np.linalg.qr(span)
    return Configuration(verts @ basis)


def close_packed_patch(dimension: int, shells: int = 1) -> Configuration:
    """Finite close-packed patch with nearest-neighbor spacing 1.

    d=1: a chain (2 neighbors per interior site); d=2: a triangular-lattice
    disc (6 neighbors); d=3: a face-centered cubic window (12 = 2d(d-1)
    neighbors).  The origin is always an interior site once shells >= 1.
    """
    if shells < 1:
        raise ValueError("need at least one shell")
    if dimension == 1:
        pts = [[float(i)] for i in range(-shells, shells + 1)]
    elif dimension == 2:
        h = math.sqrt(3.0) / 2.0
        pts = [
            [i + 0.5 * j, h * j]
            for i in range(-shells, shells + 1)
            for j in range(-shells, shells + 1)
            if abs(i + j) <= shells
        ]
    elif dimension == 3:
        s = 1.0 / math.sqrt(2.0)
        pts = [
            [s * i, s * j, s * k]
            for i in range(-shells, shells + 1)
            for j in range(-shells, shells + 1)
            for k in range(-shells, shells + 1)
            if (i + j + k) % 2 == 0
        ]
    else:
        raise ValueError(f"close-packed patches support d in {{1, 2, 3}}, got {dimension}")
    return Configuration(np.array(pts))


def coordination_number(
    config: Configuration, index: int | None = None, spacing: float = 1.0, rtol: float = 1e-9
) -> int:
    """Number of sites at distance `spacing` from one site (default: nearest the origin)."""
    pts = config.points
    if index is None:
        index = int(np.argmin(np.sum(pts * pts, axis=1)))
    d = np.sqrt(np.sum((pts - pts[index]) ** 2, axis=1))
    close = np.abs(d - spacing) <= rtol * spacing
    close[index] = False
    return int(np.count_nonzero(close))


def unit_distance_pair_count(
    config: Configuration, spacing: float = 1.0, rtol: float = 1e-9
) -> int:
    """Total number of point pairs at distance `spacing`."""
    from .cluster import pair_distances

    if config.n == 1:
        return 0
    d = pair_distances(config)
    return int(np.count_nonzero(np.abs(d - spacing) <= rtol * spacing))


def _energy(p: PairPotential, pts: np.ndarray) -> float:
    n = pts.shape[0]
    iu, ju = np.triu_indices(n, 1)
    diff = pts[iu] - pts[ju]
    v = p.evaluate_many(np.sqrt(np.sum(diff * diff, axis=1)))
    if np.isinf(v).any():
        return math.inf
    return math.fsum(v.tolist())


def _witness_points(p: PairPotential, n: int, d: int) -> list[np.ndarray]:
    r0 = p.well_radius if p.well_radius else max(p.hard_core, 1.0)
    out = []
    # dispersed line: interactions negligible, pins the estimate at >= ~0
    spacing = 10.0 * max(r0, p.hard_core, 1.0)
    line = np.zeros((n, d))
    line[:, 0] = spacing * np.arange(n)
    out.append(line)
    # regular simplex at the well radius when n points fit one
    if 2 <= n <= d + 1:
        simplex = simplex_configuration(n - 1, side=r0).points
        padded = np.zeros((n, d))
        padded[:, : n - 1] = simplex
        out.append(padded)
    # compact cluster cut from a close-packed patch, scaled to the well radius
    if d in (1, 2, 3):
        shells = max(1, math.ceil(n ** (1.0 / d)))
        patch = close_packed_patch(d, shells).points
        by_radius = np.lexsort((*patch.T[::-1], np.sum(patch * patch, axis=1)))
        if len(by_radius) >= n:
            out.append(r0 * patch[by_radius[:n]])
    return out


def estimate_stability(
    p: PairPotential,
    n: int,
    dimension: int | None = None,
    starts: int = 8,
    seed: int = 0,
    workers: int = 1,
) -> StabilityEstimate:
    """Estimate B_n and Bbar_n by multi-start Nelder-Mead on the pair energy.

    The first point is pinned at the origin to remove translations.  Moves
    into a hard core return +inf and are simply rejected by the simplex.
    Witness energies enter the reduction directly, so the estimate never does
    worse than the best seeded witness.  Deterministic for a fixed seed.
    """
    if n < 2:
        raise ValueError("stability constants need n >= 2")
    if starts < 0:
        raise ValueError("starts must be nonnegative")
    d = dimension if dimension is not None else p.dimension
    witnesses = _witness_points(p, n, d)
    candidates = [(_energy(p, w), w) for w in witnesses]

    r0 = p.well_radius if p.well_radius else max(p.hard_core, 1.0)
    start_points = list(witnesses)
    for k in range(starts):
        rng = spawned_rng(seed, k)
        for _ in range(64):
            pts = rng.normal(0.0, 0.7 * r0 * n ** (1.0 / d), size=(n, d))
            if math.isfinite(_energy(p, pts)):
                break
        else:
            continue
        start_points.append(pts)

    def refine(pts0: np.ndarray) -> tuple[float, np.ndarray]:
        x0 = (pts0 - pts0[0]).ravel()[d:]

        def objective(x: np.ndarray) -> float:
            pts = np.vstack([np.zeros((1, d)), x.reshape(n - 1, d)])
            return _energy(p, pts)

        res = minimize(
            objective,
            x0,
            method="Nelder-Mead",
            options={"xatol": 1e-7, "fatol": 1e-10, "maxiter": 4000},
        )
        if not math.isfinite(res.fun):
            return math.inf, pts0
        pts = np.vstack([np.zeros((1, d)), res.x.reshape(n - 1, d)])
        return float(res.fun), pts

    candidates.extend(ordered_map(refine, start_points, workers))
    best_energy, best_pts = min(candidates, key=lambda c: c[0])
    best_energy += 0.0  # normalise -0.0
    return StabilityEstimate(
        n=n,
        dimension=d,
        b_n=-best_energy / n,
        bbar_n=-best_energy / (n - 1),
        best_energy=best_energy,
        best_configuration=Configuration(best_pts),
        starts=starts,
        seed=seed,
    )


@dataclass(frozen=True)
class StabilityCheckReport:
    """Randomised and structural checks of the stability inequalities."""

    potential: str
    trials: int
    violations_b: int
    violations_bbar: int
    min_slack_b: float
    min_slack_bbar: float
    cap_general_ok: bool | None
    cap_well_form_ok: bool | None
    passed: bool


def _well_form_cap(d: int) -> float:
    # cap on Bbar/B for potentials with one negative minimum and negative tail
    if d == 1:
        return 1.5
    if d == 2:
        return 7.0 / 6.0
    return (2.0 * d * (d - 1) + 1.0) / (2.0 * d * (d - 1))


def check_stability_inequalities(
    p: PairPotential,
    estimates: tuple[StabilityEstimate, ...] = (),
    trials: int = 10000,
    seed: int = 0,
    n_values: tuple[int, ...] = (2, 3, 4, 5, 6),
    scales: tuple[float, ...] = (0.6, 1.0, 1.6),
    tol: float = 1e-9,
) -> StabilityCheckReport:
    """Check U >= -n B and U >= -(n-1) Bbar on random configurations.

    Also checks the structural caps Bbar_n <= (d+1)/d * B (always) and the
    sharper single-well cap when the potential has a negative minimum.  A
    violation means either wrong constants or a genuine counterexample; both
    belong in the report, loudly.
    """
    if p.known_b is None or p.known_bbar is None:
        from .errors import UnsupportedPotentialError

        raise UnsupportedPotentialError(
            f"potential {p.name!r} needs known_b and known_bbar for this check"
        )
    b, bbar = p.known_b, p.known_bbar
    d = p.dimension
    r0 = p.well_radius if p.well_radius else max(p.hard_core, 1.0)
    combos = [(n, s) for n in n_values for s in scales]
    per = max(1, trials // len(combos))
    viol_b = viol_bbar = 0
    slack_b = slack_bbar = math.inf
    done = 0
    for idx, (n, scale) in enumerate(combos):
        count = min(per, max(0, trials - done))
        if count == 0:
            break
        done += count
        rng = spawned_rng(seed, idx)
        pts = rng.normal(0.0, scale * r0, size=(count, n, d))
        iu, ju = np.triu_indices(n, 1)
        diff = pts[:, iu, :] - pts[:, ju, :]
        v = p.evaluate_many(np.sqrt(np.sum(diff * diff, axis=2)))
        u = np.where(np.isinf(v).any(axis=1), np.inf, np.sum(v, axis=1))
        sb = u + n * b
        sbb = u + (n - 1) * bbar
        viol_b += int(np.count_nonzero(sb < -tol))
        viol_bbar += int(np.count_nonzero(sbb < -tol))
        slack_b = min(slack_b, float(np.min(sb)))
        slack_bbar = min(slack_bbar, float(np.min(sbb)))

    cap_general: bool | None = None
    if estimates:
        limit = (d + 1.0) / d * b * (1.0 + tol) + tol
        cap_general = all(e.bbar_n <= limit for e in estimates)
    cap_well: bool | None = None
    if p.well_depth and p.well_radius:
        limit = _well_form_cap(d) * b * (1.0 + tol) + tol
        cap_well = bbar <= limit and all(e.bbar_n <= limit for e in estimates)

    passed = (
        viol_b == 0
        and viol_bbar == 0
        and cap_general in (None, True)
        and cap_well in (None, True)
    )
    return StabilityCheckReport(
        potential=p.name,
        trials=done,
        violations_b=viol_b,
        violations_bbar=viol_bbar,
        min_slack_b=slack_b,
        min_slack_bbar=slack_bbar,
        cap_general_ok=cap_general,
        cap_well_form_ok=cap_well,
        passed=passed,
    )
