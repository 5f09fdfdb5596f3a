"""Scalar numerics behind the convergence radii.

Two radial integrals summarise a potential at inverse temperature beta:

    C(beta)      = integral over R^d of |1 - e^{-beta V(x)}| dx
    Ctilde(beta) = integral over R^d of (1 - e^{-beta |V(x)|}) dx

with Ctilde <= C (equality for nonnegative potentials).  Combined with the
stability constants they give three radii:

    Mayer series:          1 / (e^{beta B + 1} Ctilde)
    virial, classical:     g(e^{2 beta B}) / (e^{2 beta B} C)
    virial, via Bbar:      g(1) / (Ctilde e^{beta Bbar})

where g(u) = max over 0 < w < ln(1+u) of ((1+u) e^{-w} - 1) w / u is the
gain factor from Lagrange inversion of the density series.  g is evaluated by
solving the stationarity equation (1+u) e^{-w} (1-w) = 1 with a bracketed
root finder; the inverse of w e^{-w} on [0, 1] (the tree function) drives the
density lower-bound curve whose maximum reproduces g(1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.integrate import quad
from scipy.optimize import brentq, minimize_scalar

from .errors import TemperednessError, UnsupportedPotentialError
from .potentials import PairPotential

__all__ = [
    "QuadratureResult",
    "RadiiReport",
    "integral_C",
    "integral_Ctilde",
    "lp_gain",
    "lp_gain_argmax",
    "tree_function",
    "tree_function_series",
    "density_lower_bound",
    "density_lower_bound_series",
    "radius_mayer",
    "radius_lebowitz_penrose",
    "radius_virial_basuev",
    "build_radii_report",
]

_TAIL_REL = 1e-11
_MAX_TAIL_DOUBLINGS = 256
_TAIL_GROWTH_LIMIT = 4


@dataclass(frozen=True)
class QuadratureResult:
    """Value and error estimate of one radial integral (kind 'C' or 'Ctilde')."""

    value: float
    error: float
    beta: float
    kind: str

    def __post_init__(self) -> None:
        if self.value < 0.0 or self.error < 0.0:
            raise ValueError("integral value and error must be nonnegative")


def _surface_area(d: int) -> float:
    # area of the unit sphere S^{d-1}: 2, 2*pi, 4*pi for d = 1, 2, 3
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


def _quad_panel(f, lo: float, hi: float) -> tuple[float, float]:
    out = quad(f, lo, hi, epsabs=1e-13, epsrel=1e-12, limit=200, full_output=1)
    return out[0], out[1]


def _radial_integral(p: PairPotential, beta: float, transform, kind: str) -> QuadratureResult:
    """S_{d-1} * int_0^inf r^{d-1} transform(V(r)) dr.

    The hard core contributes a closed form (the integrand is exactly 1
    there).  Panels split at the potential's breakpoints; beyond the last
    breakpoint the tail is accumulated over dyadic panels [R, 2R] until a
    panel falls below 1e-11 of the running total, which bounds the remainder
    well under 1e-10 of the result for the fast-decaying tails supported
    here.  Panels that stop decaying raise TemperednessError.
    """
    if not beta > 0.0:
        raise ValueError("inverse temperature must be positive")
    d = p.dimension
    sphere = _surface_area(d)

    def integrand(r: float) -> float:
        return r ** (d - 1) * transform(p.evaluate(r))

    parts: list[float] = []
    errs: list[float] = []
    core = p.hard_core
    if core > 0.0:
        parts.append(core ** d / d)
    splits = sorted(
        {
            float(x)
            for x in (*p.breakpoints, p.well_radius or 0.0)
            if math.isfinite(x) and x > core
        }
    )
    lo = core
    for hi in splits:
        val, err = _quad_panel(integrand, lo, hi)
        parts.append(val)
        errs.append(err)
        lo = hi
    edge = max(lo, 1.0)
    if edge > lo:
        val, err = _quad_panel(integrand, lo, edge)
        parts.append(val)
        errs.append(err)

    prev = math.inf
    grow = 0
    tail_bound = 0.0
    for _ in range(_MAX_TAIL_DOUBLINGS):
        val, err = _quad_panel(integrand, edge, 2.0 * edge)
        parts.append(val)
        errs.append(err)
        running = math.fsum(parts)
        if val <= max(1e-300, _TAIL_REL * running):
            if math.isfinite(prev) and prev > 0.0:
                q = min(0.95, val / prev)
                tail_bound = val * q / (1.0 - q)
            else:
                tail_bound = val
            break
        if val >= prev:
            grow += 1
            if grow >= _TAIL_GROWTH_LIMIT:
                raise TemperednessError(
                    f"tail of {p.name!r} is not integrable in dimension {d}"
                )
        else:
            grow = 0
        prev = val
        edge *= 2.0
    else:
        raise TemperednessError(
            f"tail of {p.name!r} decays too slowly to integrate in dimension {d}"
        )

    return QuadratureResult(
        value=sphere * math.fsum(parts),
        error=sphere * (math.fsum(errs) + tail_bound),
        beta=beta,
        kind=kind,
    )


def integral_C(p: PairPotential, beta: float) -> QuadratureResult:
    """C(beta) = integral of |1 - e^{-beta V}| over R^d."""
    return _radial_integral(p, beta, lambda v: abs(math.expm1(-beta * v)), "C")


def integral_Ctilde(p: PairPotential, beta: float) -> QuadratureResult:
    """Ctilde(beta) = integral of (1 - e^{-beta |V|}) over R^d."""
    return _radial_integral(p, beta, lambda v: -math.expm1(-beta * abs(v)), "Ctilde")


# -- gain factor and tree function ----------------------------------------------

def _gain_at(u: float, w: float) -> float:
    return ((1.0 + u) * math.exp(-w) - 1.0) * w / u


def _lp_gain_solve(u: float) -> tuple[float, float]:
    if not u > 0.0:
        raise ValueError(f"gain argument must be positive, got {u}")
    if math.isinf(u):
        return math.exp(-1.0), 1.0
    hi = min(1.0, math.log1p(u))
    lo = min(1e-300, 0.5 * hi)

    def stationarity(w: float) -> float:
        return (1.0 + u) * math.exp(-w) * (1.0 - w) - 1.0

    try:
        w = brentq(stationarity, lo, hi, xtol=1e-13, rtol=8.9e-16, maxiter=200)
    except ValueError:
        # bracket degenerated through rounding; fall back to a direct search
        res = minimize_scalar(
            lambda w: -_gain_at(u, w),
            bounds=(0.0, hi),
            method="bounded",
            options={"xatol": 1e-13},
        )
        w = float(res.x)
    return _gain_at(u, w), w


def lp_gain(u: float) -> float:
    """max over 0 < w < ln(1+u) of ((1+u) e^{-w} - 1) w / u.

    Evaluated by solving the stationarity equation (1+u) e^{-w} (1-w) = 1 on
    the bracket (0, min(1, ln(1+u))).  Nondecreasing on [1, inf) with limit
    1/e; roughly u/4 for small u.
    """
    return _lp_gain_solve(u)[0]


def lp_gain_argmax(u: float) -> float:
    """The maximising w of the gain expression (the stationarity root)."""
    return _lp_gain_solve(u)[1]


_INV_E = math.exp(-1.0)


def tree_function(x: float) -> float:
    """The unique w in [0, 1] with w e^{-w} = x, for x in [0, 1/e].

    w e^{-w} increases on [0, 1] and reaches 1/e at w = 1, so the root is
    unique; bracketed bisection with a Newton polish gives ~1e-13 accuracy.
    """
    if not 0.0 <= x <= _INV_E:
        raise ValueError(f"argument must lie in [0, 1/e], got {x}")
    if x == 0.0:
        return 0.0
    w = brentq(lambda w: w * math.exp(-w) - x, 0.0, 1.0, xtol=1e-15, rtol=8.9e-16)
    if w < 0.999:
        slope = (1.0 - w) * math.exp(-w)
        w -= (w * math.exp(-w) - x) / slope
    return w


def tree_function_series(x: float, terms: int) -> float:
    """Partial sum of w = sum_{k>=1} k^{k-1}/k! x^k (the tree-function series).

    Terms are computed in the log domain: k^{k-1}/k! overflows a float near
    k = 170 while the ratio stays modest.
    """
    if not 0.0 <= x < _INV_E:
        raise ValueError(f"argument must lie in [0, 1/e), got {x}")
    if terms < 1:
        raise ValueError("need at least one term")
    if x == 0.0:
        return 0.0
    logx = math.log(x)
    return math.fsum(
        math.exp((k - 1) * math.log(k) - math.lgamma(k + 1) + k * logx)
        for k in range(1, terms + 1)
    )


# -- density lower bound and radii ----------------------------------------------

def density_lower_bound(lambda_abs: float, beta: float, bbar: float, ctilde: float) -> float:
    """Lower bound on |density| at activity modulus lambda_abs.

    Valid for lambda_abs < 1/(e^{beta Bbar + 1} Ctilde).  With
    w = tree_function(Ctilde e^{beta Bbar} lambda_abs) the bound reads
    (w / (Ctilde e^{beta Bbar})) (2 e^{-w} - 1); it is positive for
    w in (0, ln 2) and vanishes at w = ln 2.
    """
    if lambda_abs < 0.0:
        raise ValueError("activity modulus must be nonnegative")
    scale = ctilde * math.exp(beta * bbar)
    if not lambda_abs < 1.0 / (math.e * scale):
        raise ValueError("activity modulus outside the guaranteed region")
    w = tree_function(scale * lambda_abs)
    return (w / scale) * (2.0 * math.exp(-w) - 1.0)


def density_lower_bound_series(
    lambda_abs: float, beta: float, bbar: float, ctilde: float, terms: int = 200
) -> float:
    """Series form of the same bound: 2 lambda - (partial tree series)/scale."""
    if lambda_abs < 0.0:
        raise ValueError("activity modulus must be nonnegative")
    scale = ctilde * math.exp(beta * bbar)
    if not lambda_abs < 1.0 / (math.e * scale):
        raise ValueError("activity modulus outside the guaranteed region")
    return 2.0 * lambda_abs - tree_function_series(scale * lambda_abs, terms) / scale


def _check_radius_args(beta: float, const: float, integral: float) -> None:
    if beta < 0.0 or const < 0.0 or integral < 0.0:
        raise ValueError("radius arguments must be nonnegative")


def radius_mayer(beta: float, b: float, ctilde: float) -> float:
    """Activity radius 1/(e^{beta B + 1} Ctilde); +inf when Ctilde = 0."""
    _check_radius_args(beta, b, ctilde)
    if ctilde == 0.0:
        return math.inf
    t = beta * b + 1.0
    if t > 700.0:
        return math.exp(-t - math.log(ctilde))
    return 1.0 / (math.exp(t) * ctilde)


def radius_lebowitz_penrose(beta: float, b: float, c_value: float) -> float:
    """Density radius g(e^{2 beta B}) / (e^{2 beta B} C); +inf when C = 0."""
    _check_radius_args(beta, b, c_value)
    if c_value == 0.0:
        return math.inf
    t = 2.0 * beta * b
    if t < 700.0:
        u = math.exp(t)
        denom = u * c_value
        if math.isfinite(denom):
            return lp_gain(u) / denom
    # far asymptote: g -> 1/e
    return math.exp(-1.0 - t - math.log(c_value))


def radius_virial_basuev(beta: float, bbar: float, ctilde: float) -> float:
    """Density radius g(1) / (Ctilde e^{beta Bbar}); +inf when Ctilde = 0.

    Equals the maximum over w in (0, ln 2) of the density lower-bound curve.
    Monotone decreasing in Bbar, so an upper bound for Bbar still yields a
    valid (conservative) radius lower bound.
    """
    _check_radius_args(beta, bbar, ctilde)
    if ctilde == 0.0:
        return math.inf
    g1 = lp_gain(1.0)
    t = beta * bbar
    if t < 700.0:
        denom = ctilde * math.exp(t)
        if math.isfinite(denom):
            return g1 / denom
    return math.exp(math.log(g1) - t - math.log(ctilde))


@dataclass(frozen=True)
class RadiiReport:
    """All scalars for one potential at one inverse temperature."""

    beta: float
    stability_b: float
    basuev_bbar: float
    bbar_is_upper_bound: bool
    c_integral: float
    c_error: float
    ctilde_integral: float
    ctilde_error: float
    gain_unit: float
    gain_lp: float
    mayer_radius: float
    lp_radius: float
    virial_radius: float
    ratio_virial_to_lp: float

    def as_dict(self) -> dict:
        return {
            "beta": self.beta,
            "stability_b": self.stability_b,
            "basuev_bbar": self.basuev_bbar,
            "bbar_is_upper_bound": self.bbar_is_upper_bound,
            "c_integral": self.c_integral,
            "c_error": self.c_error,
            "ctilde_integral": self.ctilde_integral,
            "ctilde_error": self.ctilde_error,
            "gain_unit": self.gain_unit,
            "gain_lp": self.gain_lp,
            "mayer_radius": self.mayer_radius,
            "lp_radius": self.lp_radius,
            "virial_radius": self.virial_radius,
            "ratio_virial_to_lp": self.ratio_virial_to_lp,
        }


def build_radii_report(p: PairPotential, beta: float) -> RadiiReport:
    """Run both quadratures and assemble every radius and the headline ratio.

    Requires known_b and known_bbar on the potential; when the stored Bbar is
    an upper bound the virial radius and the ratio are conservative lower
    bounds (both are decreasing in Bbar) and the report flags it.
    """
    if p.known_b is None:
        raise UnsupportedPotentialError(f"potential {p.name!r} is missing known_b")
    if p.known_bbar is None:
        raise UnsupportedPotentialError(f"potential {p.name!r} is missing known_bbar")
    qc = integral_C(p, beta)
    qct = integral_Ctilde(p, beta)
    b, bbar = p.known_b, p.known_bbar
    t = 2.0 * beta * b
    gain_lp = lp_gain(math.exp(t)) if t < 700.0 else _INV_E
    r_mayer = radius_mayer(beta, b, qct.value)
    r_lp = radius_lebowitz_penrose(beta, b, qc.value)
    r_virial = radius_virial_basuev(beta, bbar, qct.value)
    ratio = _safe_ratio(r_virial, r_lp, beta, b, bbar, qc.value, qct.value)
    return RadiiReport(
        beta=beta,
        stability_b=b,
        basuev_bbar=bbar,
        bbar_is_upper_bound=p.bbar_is_upper_bound,
        c_integral=qc.value,
        c_error=qc.error,
        ctilde_integral=qct.value,
        ctilde_error=qct.error,
        gain_unit=lp_gain(1.0),
        gain_lp=gain_lp,
        mayer_radius=r_mayer,
        lp_radius=r_lp,
        virial_radius=r_virial,
        ratio_virial_to_lp=ratio,
    )


def _safe_ratio(
    r_virial: float,
    r_lp: float,
    beta: float,
    b: float,
    bbar: float,
    c_value: float,
    ctilde: float,
) -> float:
    if 0.0 < r_lp < math.inf and 0.0 < r_virial < math.inf:
        ratio = r_virial / r_lp
        if 0.0 < ratio < math.inf:
            return ratio
    if ctilde == 0.0 or c_value == 0.0:
        return 1.0 if ctilde == c_value else math.nan
    # log-domain fallback for extreme temperatures
    t = 2.0 * beta * b
    gain_lp = lp_gain(math.exp(t)) if t < 700.0 else _INV_E
    log_ratio = (
        math.log(lp_gain(1.0))
        - beta * bbar
        - math.log(ctilde)
        - math.log(gain_lp)
        + t
        + math.log(c_value)
    )
    return math.exp(log_ratio)
