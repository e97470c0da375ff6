"""Distributions, peak metrics, closed-form widths, and the optimizer."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lattice_epr import analysis, diatom
from lattice_epr.errors import (
    ConditioningError,
    DomainError,
    GridError,
    NoPeakError,
    SingularityError,
)
from conftest import nearest_only_profile


@pytest.fixture(scope="module")
def small_ground(li_hopping):
    h = diatom.build_hamiltonian(16, li_hopping.v_hop, nearest_only_profile(-2.16))
    return diatom.ground_state(h)


def test_position_density_normalizes(small_ground, li_wannier):
    grid = analysis.joint_position_density(small_ground, li_wannier, 32)
    assert grid.total() == pytest.approx(1.0, abs=1e-6)
    assert np.all(grid.density >= 0)


def test_position_density_gaussian_orbital(small_ground):
    grid = analysis.joint_position_density(small_ground, 0.136, 32)
    assert grid.total() == pytest.approx(1.0, abs=1e-6)


def test_position_density_grid_guard(small_ground):
    with pytest.raises(GridError):
        analysis.joint_position_density(small_ground, 0.136, 8)


def test_momentum_density_normalizes(small_ground, li_wannier):
    grid = analysis.joint_momentum_density(small_ground, li_wannier, zones=2)
    assert grid.total() == pytest.approx(1.0, abs=1e-6)


def test_momentum_density_incommensurate_grid(small_ground, li_wannier):
    with pytest.raises(GridError):
        analysis.joint_momentum_density(
            small_ground, li_wannier, p_grid=np.linspace(-1.0, 1.0, 7)
        )


def test_momentum_matches_fourier_transform_of_position_amplitude(
    small_ground, li_wannier
):
    # for a pure state the momentum density must be the squared Fourier
    # transform of the position amplitude field
    n = small_ground.n_sites
    step = 1.0 / 32
    x = np.arange(n * 32) * step
    sites = np.arange(n, dtype=float)
    dx = (x[:, None] - sites[None, :] + n / 2.0) % n - n / 2.0
    w = analysis._orbital_amplitude(li_wannier, dx)
    psi = w @ small_ground.amplitude @ w.T
    mom = analysis.joint_momentum_density(small_ground, li_wannier, zones=2)
    p = mom.axis1
    ft = np.exp(-1j * np.outer(p, x)) * step
    dens = np.abs(ft @ psi @ ft.T) ** 2
    dp = float(p[1] - p[0])
    dens /= dens.sum() * dp * dp
    assert np.max(np.abs(dens - mom.density)) <= 1e-8 * np.max(mom.density)


def test_marginals_normalize_and_match_direct_sum(small_ground, li_wannier):
    grid = analysis.joint_momentum_density(small_ground, li_wannier, zones=2)
    for axis in (1, 2):
        m = analysis.marginal(grid, axis)
        assert m.total() == pytest.approx(1.0, abs=1e-8)
    direct = grid.density.sum(axis=1) * grid.d2
    assert np.allclose(analysis.marginal(grid, 1).density, direct, atol=1e-12)


def test_conditional_density(small_ground, li_wannier):
    grid = analysis.joint_position_density(small_ground, li_wannier, 32)
    sl = analysis.conditional_density(grid, axis=1, value=8.5)
    assert sl.total() == pytest.approx(1.0, abs=1e-8)
    with pytest.raises(ConditioningError):
        analysis.conditional_density(grid, axis=1, value=1e4)
    with pytest.raises(DomainError):
        analysis.conditional_density(grid, axis=3, value=0.0)


def test_sum_momentum_marginal_registration():
    # two delta ridges at p1 + p2 = 0 must land on one output bin
    p = np.arange(-4, 5) * 0.5
    dens = np.zeros((9, 9))
    dens[2, 6] = 1.0
    dens[6, 2] = 1.0
    grid = analysis.DistributionGrid(axis1=p, axis2=p.copy(), density=dens, kind="momentum")
    marg = analysis.sum_momentum_marginal(grid)
    i = int(np.argmax(marg.density))
    assert marg.x[i] == pytest.approx(0.0)
    assert marg.total() == pytest.approx(1.0, abs=1e-12)


def test_peak_metrics_gaussian():
    x = np.linspace(-5, 5, 4001)
    sigma = 0.3
    dens = np.exp(-(x**2) / (2.0 * sigma**2))
    pm = analysis.peak_metrics(x, dens)
    assert pm.hwhm == pytest.approx(sigma * analysis.GAUSS_HWHM, rel=1e-3)
    assert pm.sigma_equiv == pytest.approx(sigma, rel=1e-3)
    assert pm.spacing is None


def test_peak_metrics_comb():
    x = np.linspace(0, 10, 8001)
    dens = sum(np.exp(-((x - c) ** 2) / (2.0 * 0.05**2)) for c in (2, 4, 6, 8))
    pm = analysis.peak_metrics(x, dens)
    assert pm.spacing == pytest.approx(2.0, rel=1e-3)
    assert len(pm.peak_positions) == 4


def test_peak_metrics_flat_raises():
    with pytest.raises(NoPeakError):
        analysis.peak_metrics(np.arange(10.0), np.ones(10))


def test_folded_sum_momentum_width_estimators():
    env = diatom.envelope_state(64, 4.0)
    hwhm = analysis.folded_sum_momentum_width(env, "hwhm")
    var = analysis.folded_sum_momentum_width(env, "variance")
    expected = 1.0 / (math.sqrt(2.0) * 4.0)
    assert hwhm == pytest.approx(expected, rel=0.05)
    assert var == pytest.approx(expected, rel=0.05)
    with pytest.raises(DomainError):
        analysis.folded_sum_momentum_width(env, "fwhm")


def test_delta_x_minus():
    assert analysis.delta_x_minus(0.1, 0.0, -2.0) == pytest.approx(0.1)
    val = analysis.delta_x_minus(0.136, -0.0355, -2.16)
    assert val == pytest.approx(
        math.sqrt(0.136**2 + 2.0 * (0.0355 / 2.16) ** 2), rel=1e-12
    )
    with pytest.raises(SingularityError):
        analysis.delta_x_minus(0.1, 0.01, 0.0)


def test_delta_p_plus_prep_limits():
    assert analysis.delta_p_plus_prep(6.0, 0.0) == pytest.approx(
        1.0 / (math.sqrt(2.0) * 6.0)
    )
    # tanh < 1 raises the width above the zero-temperature floor
    assert analysis.delta_p_plus_prep(6.0, 0.01) > analysis.delta_p_plus_prep(6.0, 0.0)


def test_s_parameter_identity():
    report = analysis.epr_report(0.2, 0.3)
    assert report.s == pytest.approx(1.0 / (2.0 * 0.2 * 0.3), rel=1e-15)
    assert report.s == analysis.s_parameter(report.dx_minus, report.dp_plus)


def test_s_estimate_consistency_with_widths():
    # the closed-form estimate is 1/(2 sigma dp_plus_prep) by construction
    sigma, sigma_e, t = 0.136, 6.0, 7.6e-4
    s = analysis.s_estimate(sigma_e, sigma, t)
    dp = analysis.delta_p_plus_prep(sigma_e, t)
    assert s == pytest.approx(1.0 / (2.0 * sigma * dp), rel=1e-12)


@settings(max_examples=50)
@given(
    st.floats(min_value=5e-4, max_value=5e-2),
    st.floats(min_value=1.1, max_value=5.0),
)
def test_s_estimate_monotone_decreasing_in_temperature(t, factor):
    s_cold = analysis.s_estimate(6.0, 0.136, t)
    s_hot = analysis.s_estimate(6.0, 0.136, factor * t)
    assert s_hot < s_cold


def test_optimizer_matches_grid_scan():
    sigma = 0.136
    for t in (7.6e-4, 7.6e-3):
        res = analysis.optimize_sigma_e(sigma, t, 1.0, 30.0)
        grid = np.linspace(1.0, 30.0, 100001)
        s_grid = grid / (math.sqrt(2.0) * sigma) * np.tanh(
            1.0 / (math.pi**2 * grid**2 * t)
        )
        best = grid[np.argmax(s_grid)]
        assert abs(res.sigma_e - best) < 1e-3
        assert res.s >= float(np.max(s_grid)) - 1e-9


def test_optimizer_flags_boundary():
    # at zero temperature s grows linearly in sigma_E: boundary maximum
    res = analysis.optimize_sigma_e(0.136, 0.0, 1.0, 30.0)
    assert res.on_boundary
    assert res.sigma_e == pytest.approx(30.0)


def test_pair_fraction():
    assert analysis.pair_fraction(6.0) == pytest.approx(1.0 / 6.0)
    with pytest.raises(DomainError):
        analysis.pair_fraction(0.0)
