import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from virialbounds import (
    PairPotential,
    hard_sphere,
    lennard_jones,
    potential_from_config,
    square_well,
    tabulated,
)

ZERO_CROSSING = 2.0 ** (-1.0 / 6.0)  # root of r^-12 = 2 r^-6


def test_lj_basics(lj):
    assert lj.evaluate(1.0) == -1.0
    assert abs(lj.evaluate(ZERO_CROSSING)) < 1e-13
    assert lj.evaluate(0.0) == math.inf
    assert lj.dimension == 3
    assert lj.well_depth == 1.0 and lj.well_radius == 1.0
    assert lj.known_b == 8.61
    assert lj.known_bbar == 8.61861 and lj.bbar_is_upper_bound


def test_hard_sphere_core(spheres):
    assert spheres.evaluate(0.5) == math.inf
    assert spheres.evaluate(1.0) == 0.0
    assert spheres.evaluate(2.0) == 0.0
    assert spheres.known_b == 0.0 and spheres.known_bbar == 0.0


def test_square_well_values(rods):
    assert rods.evaluate(0.5) == math.inf
    assert rods.evaluate(1.2) == -1.0
    assert rods.evaluate(2.0) == 0.0
    assert rods.known_b == 1.0 and rods.known_bbar == 1.0


def test_square_well_constants_only_in_single_neighbor_regime():
    wide = square_well(core=1.0, well_range=2.5, depth=1.0, dimension=1)
    assert wide.known_b is None and wide.known_bbar is None
    three_d = square_well(core=1.0, well_range=1.5, depth=1.0, dimension=3)
    assert three_d.known_b is None


def test_negative_distance_rejected(lj):
    with pytest.raises(ValueError):
        lj.evaluate(-0.1)
    with pytest.raises(ValueError):
        lj.evaluate_many(np.array([0.5, -1.0]))


def test_bbar_below_b_rejected():
    with pytest.raises(ValueError):
        PairPotential(
            name="bad",
            dimension=1,
            scalar_fn=lambda r: 0.0,
            known_b=2.0,
            known_bbar=1.0,
        )


def test_mayer_factor_values(lj, spheres):
    # V = 0 gives f = 0
    assert lj.mayer_f(1.0, ZERO_CROSSING) == pytest.approx(0.0, abs=1e-12)
    # hard core gives exactly -1
    assert spheres.mayer_f(1.0, 0.5) == -1.0
    assert lj.mayer_f(1.0, 1.0) == pytest.approx(math.e - 1.0, rel=1e-14)


def test_abs_mayer_factor_values(lj, spheres):
    assert spheres.abs_mayer_f(1.0, 0.5) == 1.0
    assert abs(lj.abs_mayer_f(1.0, ZERO_CROSSING)) < 1e-12
    assert lj.abs_mayer_f(1.0, 1.0) == pytest.approx(1.0 - math.exp(-1.0), rel=1e-14)


def test_mayer_beta_validation(lj):
    with pytest.raises(ValueError):
        lj.mayer_f(0.0, 1.0)
    with pytest.raises(ValueError):
        lj.abs_mayer_f(-1.0, 1.0)


@pytest.mark.parametrize("beta", [0.3, 1.0, 3.0])
def test_abs_mayer_vs_mayer_pointwise(lj, rods, spheres, beta):
    # |f| <= fabs where V >= 0 (equality there) and |f| >= fabs where V <= 0
    grid = np.linspace(0.05, 3.0, 231)
    for p in (lj, rods, spheres):
        v = p.evaluate_many(grid)
        f = p.mayer_f_many(beta, grid)
        fabs = p.abs_mayer_f_many(beta, grid)
        assert np.all(fabs >= -1e-15) and np.all(fabs <= 1.0)
        pos = v >= 0.0
        assert np.all(fabs[pos] >= np.abs(f[pos]) - 1e-15)
        neg = v <= 0.0
        assert np.all(fabs[neg] <= np.abs(f[neg]) + 1e-15)


def test_mayer_monotone_in_energy(lj):
    # lower energy -> larger Mayer factor at fixed beta
    rs = np.linspace(0.85, 2.5, 80)
    vs = lj.evaluate_many(rs)
    fs = lj.mayer_f_many(1.0, rs)
    order = np.argsort(vs)
    assert np.all(np.diff(fs[order]) <= 1e-12)


def test_vectorized_matches_scalar(lj, rods, spheres):
    rs = np.array([0.0, 0.3, ZERO_CROSSING, 1.0, 1.25, 1.5, 2.0, 10.0])
    for p in (lj, rods, spheres):
        many = p.evaluate_many(rs)
        one = np.array([p.evaluate(float(r)) for r in rs])
        assert np.array_equal(many, one)


def test_tabulated_interpolation():
    p = tabulated([0.0, 1.0, 2.0], [3.0, -1.0, 0.0], dimension=1)
    assert p.evaluate(0.5) == pytest.approx(1.0)
    assert p.evaluate(1.5) == pytest.approx(-0.5)
    # clamped below the first knot, zero beyond the last
    assert p.evaluate(0.0) == 3.0
    assert p.evaluate(5.0) == 0.0
    assert p.well_depth == 1.0 and p.well_radius == 1.0


def test_tabulated_validation():
    with pytest.raises(ValueError):
        tabulated([1.0, 0.5], [0.0, 0.0])
    with pytest.raises(ValueError):
        tabulated([0.0, 1.0], [math.inf, 0.0])


def test_potential_from_config():
    p = potential_from_config({"kind": "square_well", "core": 1.0, "well_range": 1.5, "depth": 2.0})
    assert p.evaluate(1.2) == -2.0
    with pytest.raises(ValueError):
        potential_from_config({"kind": "nope"})
    with pytest.raises(ValueError):
        potential_from_config({"kind": "hard_sphere", "radius": 1.0})


@settings(max_examples=60, deadline=None)
@given(r=st.floats(min_value=0.0, max_value=50.0), beta=st.floats(min_value=1e-3, max_value=20.0))
def test_abs_mayer_in_unit_interval(r, beta):
    lj = lennard_jones()
    value = lj.abs_mayer_f(beta, r)
    assert 0.0 <= value <= 1.0
    assert lj.mayer_f(beta, r) >= -1.0
