"""Radial pair potentials and their Mayer factors.

Energies are extended reals: +inf encodes a hard core; -inf and NaN are never
produced.  Every potential evaluates on scalars and on numpy arrays of any
shape.  Instances are immutable and safe to share across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "PairPotential",
    "lennard_jones",
    "hard_sphere",
    "square_well",
    "tabulated",
    "potential_from_config",
]


@dataclass(frozen=True)
class PairPotential:
    """A radial pair interaction V(r) plus the metadata the bound formulas need.

    known_b is the usual stability constant (sup over n of sup -U/n) when a
    reliable value exists; known_bbar is the variant normalised by n-1
    (Basuev's constant), with bbar_is_upper_bound marking a cited upper bound
    rather than an exact value.  well_depth is -inf V and well_radius its
    argmin.  hard_core is the radius strictly below which V is +inf, and
    breakpoints lists the radii where V or its derivative jumps; the
    quadrature panels split there.
    """

    name: str
    dimension: int
    scalar_fn: Callable[[float], float]
    vector_fn: Callable[[np.ndarray], np.ndarray] | None = None
    known_b: float | None = None
    known_bbar: float | None = None
    bbar_is_upper_bound: bool = False
    well_depth: float | None = None
    well_radius: float | None = None
    hard_core: float = 0.0
    breakpoints: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dimension}")
        for label in ("known_b", "known_bbar", "well_depth"):
            value = getattr(self, label)
            if value is not None and not value >= 0.0:
                raise ValueError(f"{label} must be nonnegative, got {value}")
        if self.known_b is not None and self.known_bbar is not None:
            if self.known_bbar < self.known_b:
                raise ValueError(
                    f"known_bbar ({self.known_bbar}) must be >= known_b ({self.known_b})"
                )
        if self.well_radius is not None and not self.well_radius > 0.0:
            raise ValueError("well_radius must be positive")
        if self.hard_core < 0.0:
            raise ValueError("hard_core must be nonnegative")

    # -- energies ----------------------------------------------------------

    def evaluate(self, r: float) -> float:
        """V(r) as an extended real; +inf is allowed, -inf and NaN are not."""
        if r < 0.0:
            raise ValueError(f"distance must be nonnegative, got {r}")
        v = float(self.scalar_fn(float(r)))
        if math.isnan(v) or v == -math.inf:
            raise ValueError(f"potential {self.name!r} returned {v} at r={r}")
        return v

    def evaluate_many(self, r) -> np.ndarray:
        """Vectorised V over an array of distances (shape preserved)."""
        r = np.asarray(r, dtype=float)
        if r.size and float(r.min()) < 0.0:
            raise ValueError("distances must be nonnegative")
        if self.vector_fn is not None:
            v = np.asarray(self.vector_fn(r), dtype=float)
        else:
            v = np.fromiter(
                (self.evaluate(x) for x in r.ravel()), dtype=float, count=r.size
            ).reshape(r.shape)
        return v

    # -- Mayer factors -----------------------------------------------------

    def mayer_f(self, beta: float, r: float) -> float:
        """e^{-beta V(r)} - 1; a hard core maps to exactly -1."""
        _check_beta(beta)
        return math.expm1(-beta * self.evaluate(r))

    def abs_mayer_f(self, beta: float, r: float) -> float:
        """1 - e^{-beta |V(r)|}, in [0, 1]; a hard core maps to exactly 1."""
        _check_beta(beta)
        return -math.expm1(-beta * abs(self.evaluate(r)))

    def mayer_f_many(self, beta: float, r) -> np.ndarray:
        _check_beta(beta)
        return np.expm1(-beta * self.evaluate_many(r))

    def abs_mayer_f_many(self, beta: float, r) -> np.ndarray:
        _check_beta(beta)
        return -np.expm1(-beta * np.abs(self.evaluate_many(r)))


def _check_beta(beta: float) -> None:
    if not beta > 0.0:
        raise ValueError(f"inverse temperature must be positive, got {beta}")


# -- catalog ----------------------------------------------------------------

def _lj_scalar(r: float) -> float:
    if r < 1e-45:
        return math.inf
    u = r ** -6.0
    return u * (u - 2.0)


def _lj_vector(r: np.ndarray) -> np.ndarray:
    out = np.full(r.shape, np.inf)
    pos = r > 0.0
    with np.errstate(over="ignore"):
        u = r[pos] ** -6.0
        out[pos] = u * (u - 2.0)
    return out


def lennard_jones() -> PairPotential:
    """V(r) = r^-12 - 2 r^-6 in three dimensions: depth 1 with minimum at r = 1.

    Known constants for this normalisation: B = 8.61 and Bbar <= 8.61861
    (the latter is an upper bound, 1.001 B).
    """
    return PairPotential(
        name="lennard_jones",
        dimension=3,
        scalar_fn=_lj_scalar,
        vector_fn=_lj_vector,
        known_b=8.61,
        known_bbar=8.61861,
        bbar_is_upper_bound=True,
        well_depth=1.0,
        well_radius=1.0,
        hard_core=0.0,
        breakpoints=(2.0 ** (-1.0 / 6.0), 1.0),
    )


def hard_sphere(diameter: float = 1.0, dimension: int = 3) -> PairPotential:
    """V = +inf for r < diameter, 0 beyond.  B = Bbar = 0."""
    if not diameter > 0.0:
        raise ValueError("diameter must be positive")
    a = float(diameter)

    def scalar(r: float) -> float:
        return math.inf if r < a else 0.0

    def vector(r: np.ndarray) -> np.ndarray:
        return np.where(r < a, np.inf, 0.0)

    return PairPotential(
        name="hard_sphere",
        dimension=dimension,
        scalar_fn=scalar,
        vector_fn=vector,
        known_b=0.0,
        known_bbar=0.0,
        well_depth=0.0,
        hard_core=a,
        breakpoints=(a,),
    )


def square_well(
    core: float = 1.0,
    well_range: float = 1.5,
    depth: float = 1.0,
    dimension: int = 1,
) -> PairPotential:
    """Hard core of radius `core`, constant well -depth out to `well_range`, 0 beyond.

    In one dimension with well_range <= 2*core at most adjacent particles can
    sit in each other's well, so B = Bbar = depth exactly; the constructor
    fills the known constants only in that regime.
    """
    if not 0.0 < core < well_range:
        raise ValueError("need 0 < core < well_range")
    if not depth >= 0.0:
        raise ValueError("depth must be nonnegative")
    a, rng, eps = float(core), float(well_range), float(depth)

    def scalar(r: float) -> float:
        if r < a:
            return math.inf
        return -eps if r < rng else 0.0

    def vector(r: np.ndarray) -> np.ndarray:
        return np.where(r < a, np.inf, np.where(r < rng, -eps, 0.0))

    single_neighbor = dimension == 1 and rng <= 2.0 * a
    return PairPotential(
        name="square_well",
        dimension=dimension,
        scalar_fn=scalar,
        vector_fn=vector,
        known_b=eps if single_neighbor else None,
        known_bbar=eps if single_neighbor else None,
        well_depth=eps,
        well_radius=0.5 * (a + rng),
        hard_core=a,
        breakpoints=(a, rng),
    )


def tabulated(radii, values, dimension: int = 3, name: str = "tabulated") -> PairPotential:
    """Piecewise-linear potential through (radii, values) knots.

    Extrapolation policy: the value is clamped to values[0] below the first
    knot and is exactly 0 beyond the last knot.  Knot values must be finite
    (hard cores are not representable in tabulated form).
    """
    rs = np.asarray(radii, dtype=float)
    vs = np.asarray(values, dtype=float)
    if rs.ndim != 1 or rs.shape != vs.shape or rs.size < 2:
        raise ValueError("need matching 1-d knot arrays with at least two knots")
    if not np.all(np.diff(rs) > 0.0) or rs[0] < 0.0:
        raise ValueError("knot radii must be strictly increasing and nonnegative")
    if not np.all(np.isfinite(vs)):
        raise ValueError("knot values must be finite")

    def scalar(r: float) -> float:
        return float(np.interp(r, rs, vs, right=0.0))

    def vector(r: np.ndarray) -> np.ndarray:
        return np.interp(r, rs, vs, right=0.0)

    vmin = float(vs.min())
    return PairPotential(
        name=name,
        dimension=dimension,
        scalar_fn=scalar,
        vector_fn=vector,
        well_depth=-vmin if vmin < 0.0 else 0.0,
        well_radius=float(rs[int(np.argmin(vs))]) if vmin < 0.0 else None,
        breakpoints=tuple(float(x) for x in rs),
    )


def potential_from_config(config: dict) -> PairPotential:
    """Build a potential from a config mapping: {"kind": ..., parameters...}."""
    if not isinstance(config, dict) or "kind" not in config:
        raise ValueError("potential config must be a mapping with a 'kind' field")
    kind = config["kind"]
    params = {k: v for k, v in config.items() if k != "kind"}
    try:
        if kind == "lennard_jones":
            return lennard_jones(**params)
        if kind == "hard_sphere":
            return hard_sphere(**params)
        if kind == "square_well":
            return square_well(**params)
        if kind == "tabulated":
            return tabulated(**params)
    except TypeError as exc:
        raise ValueError(f"bad parameters for potential {kind!r}: {exc}") from exc
    raise ValueError(f"unknown potential kind {kind!r}")
