import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize_scalar
from scipy.special import lambertw

from virialbounds import (
    TemperednessError,
    build_radii_report,
    density_lower_bound,
    density_lower_bound_series,
    hard_sphere,
    integral_C,
    integral_Ctilde,
    lp_gain,
    lp_gain_argmax,
    radius_lebowitz_penrose,
    radius_mayer,
    radius_virial_basuev,
    square_well,
    tabulated,
    tree_function,
    tree_function_series,
)


# -- quadrature ------------------------------------------------------------------

def test_hard_sphere_integrals_closed_form():
    p = hard_sphere(diameter=1.0, dimension=3)
    expected = 4.0 * math.pi / 3.0
    for beta in (0.5, 1.0, 10.0):
        qc = integral_C(p, beta)
        qct = integral_Ctilde(p, beta)
        assert qc.value == pytest.approx(expected, abs=1e-10)
        assert qct.value == qc.value  # identical integrands for V >= 0


def test_hard_sphere_scaling_with_diameter():
    p = hard_sphere(diameter=2.0, dimension=3)
    assert integral_C(p, 1.0).value == pytest.approx(4.0 * math.pi / 3.0 * 8.0, abs=1e-9)


def test_square_well_integrals_closed_form(rods):
    beta = 1.0
    c_exact = 2.0 * (1.0 + 0.5 * (math.e - 1.0))
    ct_exact = 2.0 * (1.0 + 0.5 * (1.0 - math.exp(-1.0)))
    qc = integral_C(rods, beta)
    qct = integral_Ctilde(rods, beta)
    assert qc.value == pytest.approx(c_exact, rel=1e-11)
    assert qct.value == pytest.approx(ct_exact, rel=1e-11)
    assert qc.error < 1e-8 * qc.value
    assert qct.error < 1e-8 * qct.value


def test_lj_integrals_dominance(lj):
    for beta in (0.5, 1.0, 10.0):
        qc = integral_C(lj, beta)
        qct = integral_Ctilde(lj, beta)
        assert 0.0 < qct.value <= qc.value
        assert qc.error < 1e-8 * qc.value
        assert qct.error < 1e-8 * qct.value


def test_positive_part_potential_has_equal_integrals():
    p = tabulated([0.0, 1.0, 2.0], [3.0, 1.0, 0.0], dimension=3)
    assert integral_C(p, 1.0).value == integral_Ctilde(p, 1.0).value


def test_nonintegrable_tail_detected():
    # V ~ r^-2 in three dimensions is not tempered
    def slow(r):
        return 1.0 / (1e-6 + r * r)

    from virialbounds import PairPotential

    p = PairPotential(name="slow", dimension=3, scalar_fn=slow)
    with pytest.raises(TemperednessError):
        integral_C(p, 1.0)


def test_quadrature_beta_validation(lj):
    with pytest.raises(ValueError):
        integral_C(lj, 0.0)


# -- gain function ----------------------------------------------------------------

def gain_grid_oracle(u: float, points: int = 400000) -> float:
    ws = np.linspace(0.0, min(1.0, math.log1p(u)), points)[1:-1]
    return float(np.max(((1.0 + u) * np.exp(-ws) - 1.0) * ws / u))


def test_gain_reference_values():
    assert lp_gain(1.0) == pytest.approx(0.14477, abs=1e-4)
    assert lp_gain(1e8) == pytest.approx(math.exp(-1.0), abs=1e-3)


def test_gain_small_argument():
    # small-u behaviour ~ u/4, checked against a dense grid search
    value = lp_gain(0.01)
    oracle = gain_grid_oracle(0.01)
    assert value == pytest.approx(oracle, rel=1e-6)
    assert value == pytest.approx(0.0025, rel=0.05)


@pytest.mark.parametrize("u", [0.1, 1.0, 7.0, 100.0, 1e4, 1e8])
def test_gain_matches_grid_search(u):
    assert lp_gain(u) == pytest.approx(gain_grid_oracle(u), rel=1e-7)


def test_gain_monotone_and_bounded():
    grid = [1.0, 10.0, 100.0, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8]
    values = [lp_gain(u) for u in grid]
    assert all(b >= a - 1e-15 for a, b in zip(values, values[1:]))
    assert all(0.0 < v < math.exp(-1.0) for v in values)


def test_gain_domain():
    with pytest.raises(ValueError):
        lp_gain(0.0)
    with pytest.raises(ValueError):
        lp_gain(-1.0)


def test_gain_argmax_satisfies_stationarity():
    for u in (0.5, 1.0, 20.0):
        w = lp_gain_argmax(u)
        assert (1.0 + u) * math.exp(-w) * (1.0 - w) == pytest.approx(1.0, abs=1e-10)


# -- tree function -----------------------------------------------------------------

def test_tree_function_endpoints():
    assert tree_function(0.0) == 0.0
    assert tree_function(math.exp(-1.0)) == pytest.approx(1.0, abs=1e-7)


def test_tree_function_example():
    w = tree_function(0.2)
    assert w == pytest.approx(0.2592, abs=2e-4)
    assert w * math.exp(-w) == pytest.approx(0.2, abs=1e-13)


def test_tree_function_against_lambertw():
    for x in (0.05, 0.1, 0.2, 0.3, 0.35):
        expected = float(-lambertw(-x).real)
        assert tree_function(x) == pytest.approx(expected, abs=1e-12)


def test_tree_function_domain():
    with pytest.raises(ValueError):
        tree_function(-0.1)
    with pytest.raises(ValueError):
        tree_function(0.5)


@settings(max_examples=80, deadline=None)
@given(w=st.floats(min_value=0.0, max_value=1.0))
def test_tree_function_roundtrip(w):
    # dw/dx blows up like 1/(1-w) at the branch point, so the roundtrip is
    # conditioning-limited there; 1e-12 holds away from w = 1
    x = w * math.exp(-w)
    tol = max(1e-12, 2.0 * math.sqrt(2 * math.e * 1e-17), 3e-16 / max(1e-300, 1.0 - w))
    assert abs(tree_function(x) - w) <= tol


def test_tree_function_roundtrip_strict_away_from_branch_point():
    for w in np.linspace(0.0, 0.999, 334):
        x = w * math.exp(-w)
        assert abs(tree_function(x) - w) <= 1e-12


def test_tree_series_matches_inverse():
    for x in (0.1, 0.2, 0.3):
        assert tree_function_series(x, 100) == pytest.approx(tree_function(x), abs=1e-8)
    # nearer the radius 1/e the terms decay like (x e)^n: at x = 0.35 a hundred
    # terms truncate at ~4e-5, and ~300 terms are needed for 1e-8
    gap = tree_function(0.35) - tree_function_series(0.35, 100)
    assert 1e-5 < gap < 1e-4
    assert tree_function_series(0.35, 300) == pytest.approx(tree_function(0.35), abs=1e-8)
    assert tree_function_series(0.0, 10) == 0.0
    assert tree_function_series(0.3, 1) == pytest.approx(0.3, rel=1e-15)


def test_tree_series_validation():
    with pytest.raises(ValueError):
        tree_function_series(0.5, 10)
    with pytest.raises(ValueError):
        tree_function_series(0.1, 0)


# -- density lower bound ------------------------------------------------------------

def test_density_bound_zero_activity():
    assert density_lower_bound(0.0, 1.0, 1.0, 2.0) == 0.0


def test_density_bound_closed_form_equals_series():
    beta, bbar, ct = 1.0, 1.0, 2.0
    lam = 0.5 / (math.exp(beta * bbar + 1.0) * ct)
    closed = density_lower_bound(lam, beta, bbar, ct)
    series = density_lower_bound_series(lam, beta, bbar, ct, terms=200)
    assert closed == pytest.approx(series, abs=1e-8)


def test_density_bound_vanishes_at_log2():
    beta, bbar, ct = 1.0, 0.5, 1.5
    scale = ct * math.exp(beta * bbar)
    lam = math.log(2.0) * 0.5 / scale  # w = ln 2 after inversion
    assert density_lower_bound(lam, beta, bbar, ct) == pytest.approx(0.0, abs=1e-14)


def test_density_bound_domain():
    with pytest.raises(ValueError):
        density_lower_bound(1.0, 1.0, 1.0, 2.0)  # outside the guaranteed region
    with pytest.raises(ValueError):
        density_lower_bound(-0.1, 1.0, 1.0, 2.0)


# -- radii ---------------------------------------------------------------------------

def test_radius_mayer_values():
    assert radius_mayer(1.0, 0.0, 1.0) == pytest.approx(math.exp(-1.0), rel=1e-15)
    assert radius_mayer(1.0, 0.0, 2.0) == pytest.approx(math.exp(-1.0) / 2.0, rel=1e-15)
    assert radius_mayer(1.0, 0.0, 0.0) == math.inf


def test_radius_mayer_decreasing_in_beta(lj):
    values = [
        radius_mayer(b, lj.known_b, integral_Ctilde(lj, b).value) for b in (0.5, 1.0, 2.0)
    ]
    assert values[0] > values[1] > values[2] > 0.0


def test_radius_lp_values():
    g1 = lp_gain(1.0)
    assert radius_lebowitz_penrose(1.0, 0.0, 1.0) == pytest.approx(g1, rel=1e-12)
    assert radius_lebowitz_penrose(1.0, 0.0, 2.0) == pytest.approx(g1 / 2.0, rel=1e-12)
    # far asymptote g -> 1/e at 2 beta B = 40
    expected = math.exp(-1.0) * math.exp(-40.0) / 3.0
    assert radius_lebowitz_penrose(10.0, 2.0, 3.0) == pytest.approx(expected, rel=0.01)


def test_radius_virial_value():
    ct = 4.0 * math.pi / 3.0
    value = radius_virial_basuev(1.0, 0.0, ct)
    assert value == pytest.approx(0.14477 / ct, abs=3e-5)
    assert value == pytest.approx(0.034563, abs=3e-5)


def test_radius_virial_equals_density_curve_maximum():
    beta, bbar, ct = 1.0, 0.7, 2.3
    scale = ct * math.exp(beta * bbar)
    res = minimize_scalar(
        lambda lam: -density_lower_bound(lam, beta, bbar, ct),
        bounds=(0.0, 0.9999 / (math.e * scale)),
        method="bounded",
        options={"xatol": 1e-14},
    )
    best = -res.fun
    assert radius_virial_basuev(beta, bbar, ct) == pytest.approx(best, abs=1e-10)
    # argmax-level identity: the maximising w equals the gain argmax at u = 1
    lam_star = float(res.x)
    w_star = tree_function(scale * lam_star)
    assert w_star == pytest.approx(lp_gain_argmax(1.0), abs=1e-6)


def test_radii_scaling_in_integrals():
    for radius in (
        lambda c: radius_mayer(1.0, 1.0, c),
        lambda c: radius_lebowitz_penrose(1.0, 1.0, c),
        lambda c: radius_virial_basuev(1.0, 1.0, c),
    ):
        assert radius(2.0) == pytest.approx(radius(1.0) / 2.0, rel=1e-12)
        assert radius(1.0) > radius(4.0) > 0.0


def test_radius_validation():
    with pytest.raises(ValueError):
        radius_mayer(-1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        radius_virial_basuev(1.0, -0.5, 1.0)


# -- report ---------------------------------------------------------------------------

def test_report_hard_sphere_ratio_one():
    p = hard_sphere(diameter=1.0, dimension=3)
    for beta in (1.0, 10.0):
        rep = build_radii_report(p, beta)
        assert rep.ratio_virial_to_lp == pytest.approx(1.0, abs=1e-12)
        assert rep.c_integral == rep.ctilde_integral
        assert rep.mayer_radius > 0.0 and rep.lp_radius > 0.0 and rep.virial_radius > 0.0


def test_report_ratio_consistent_with_factors(lj):
    rep = build_radii_report(lj, 1.0)
    assert rep.ratio_virial_to_lp == pytest.approx(
        rep.virial_radius / rep.lp_radius, rel=1e-12
    )
    assert rep.bbar_is_upper_bound


def test_report_requires_constants():
    from virialbounds import UnsupportedPotentialError

    p = square_well(core=1.0, well_range=2.5, depth=1.0, dimension=1)
    with pytest.raises(UnsupportedPotentialError, match="known_b"):
        build_radii_report(p, 1.0)
