"""Profiles, the weighted-quotient chart, curvature, area, Gauss-Bonnet."""

from __future__ import annotations

import math

import numpy as np
import pytest

import eqyamabe as eq
from eqyamabe.errors import DomainError, GridTooCoarse, NotCoprime
from eqyamabe.numerics import QuadratureConfig

from conftest import COPRIME_PAIRS, bump_sphere


# ---------------------------------------------------------------------------
# round spheres
# ---------------------------------------------------------------------------

def test_round_sphere_half_radius(half_sphere):
    assert eq.area(half_sphere) == pytest.approx(math.pi, rel=1e-12)
    assert eq.gauss_bonnet_check(half_sphere) == pytest.approx(2.0, abs=1e-8)
    for s in np.linspace(0.05, half_sphere.length - 0.05, 7):
        assert eq.gauss_curvature(half_sphere, s) == pytest.approx(4.0, abs=1e-10)


def test_round_sphere_unit():
    base = eq.make_round_sphere(1.0)
    assert eq.area(base) == pytest.approx(4.0 * math.pi, rel=1e-12)
    assert eq.gauss_bonnet_check(base) == pytest.approx(2.0, abs=1e-8)


def test_round_sphere_radius_two_curvature():
    base = eq.make_round_sphere(2.0)
    assert eq.gauss_curvature(base, 1.0) == pytest.approx(0.25, abs=1e-13)


def test_curvature_domain_error(half_sphere):
    with pytest.raises(DomainError):
        eq.gauss_curvature(half_sphere, 0.0)
    with pytest.raises(DomainError):
        eq.gauss_curvature(half_sphere, half_sphere.length)


# ---------------------------------------------------------------------------
# weighted quotient chart and profile
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("m1,m2", COPRIME_PAIRS)
def test_chart_analytic_derivatives(m1, m2):
    chart = eq.WpsChart(m1, m2)
    pairs = [
        (chart.lam1, chart.lam1_d1),
        (chart.lam1_d1, chart.lam1_d2),
        (chart.lam2, chart.lam2_d1),
        (chart.lam2_d1, chart.lam2_d2),
        (chart.gamma, chart.gamma_d1),
        (chart.gamma_d1, chart.gamma_d2),
        (chart.shear, chart.shear_d1),
    ]
    for t0 in (0.2, 0.5, 0.77):
        for f, df in pairs:
            assert eq.check_derivative(f, df, t0, [1e-5, 1e-6]) <= 1e-6


def test_chart_sign_invariants():
    chart = eq.WpsChart(2, 3)
    t = np.linspace(0.05, 0.95, 19)
    assert np.all(chart.lam1(t) < 0)
    assert np.all(chart.lam2(t) < 0)
    assert np.all(np.diff(chart.gamma(t)) < 0)  # strictly decreasing


def test_wps_profile_unit_weights_is_half_radius_sphere(half_sphere):
    base = eq.wps_profile(1, 1)
    s = np.linspace(1e-6, base.length - 1e-6, 501)
    assert base.length == pytest.approx(half_sphere.length, abs=1e-15)
    assert np.max(np.abs(base.phi(s) - half_sphere.phi(s))) <= 1e-8
    assert eq.area(base) == pytest.approx(math.pi, abs=1e-8)
    s_in = s[(s > 1e-3) & (s < base.length - 1e-3)]
    K = eq.gauss_curvature(base, s_in)
    assert np.max(np.abs(K - 4.0)) <= 1e-8


@pytest.mark.parametrize("m1,m2", COPRIME_PAIRS)
def test_wps_profile_gauss_bonnet(m1, m2):
    base = eq.wps_profile(m1, m2)
    assert eq.gauss_bonnet_check(base) == pytest.approx(1.0 / m1 + 1.0 / m2, abs=1e-6)


@pytest.mark.parametrize("m1,m2", COPRIME_PAIRS)
def test_wps_profile_area_closed_form(m1, m2):
    # along the chart, dA integrates to 2 pi / (m1 + m2): an independent
    # closed form obtained from int_0^1 dt / sqrt((m1^2-m2^2) t + m2^2)
    base = eq.wps_profile(m1, m2)
    assert eq.area(base) == pytest.approx(2.0 * math.pi / (m1 + m2), rel=1e-10)


def test_wps_profile_single_cone_point():
    base = eq.wps_profile(1, 2)
    assert (base.m_start, base.m_end) == (2, 1)
    h = 1e-6
    slope_end = (0.0 - float(base.phi(base.length - h))) / h
    assert slope_end == pytest.approx(-1.0, abs=1e-6)
    slope_start = float(base.phi(h)) / h
    assert slope_start == pytest.approx(0.5, abs=1e-6)


def test_wps_profile_cone_slopes_all_pairs():
    for m1, m2 in COPRIME_PAIRS:
        base = eq.wps_profile(m1, m2)
        h = 1e-6
        assert float(base.phi(h)) / h == pytest.approx(1.0 / m2, abs=1e-6)
        assert -float(base.phi(base.length - h)) / h == pytest.approx(-1.0 / m1, abs=1e-6)


def test_wps_profile_rejects_noncoprime():
    with pytest.raises(NotCoprime):
        eq.wps_profile(2, 4)
    with pytest.raises(NotCoprime):
        eq.wps_profile(0, 1)


def test_wps_profile_grid_too_coarse():
    with pytest.raises(GridTooCoarse):
        eq.wps_profile(7, 11, grid=4)


def test_wps_curvature_matches_chart():
    base = eq.wps_profile(2, 3)
    chart = eq.WpsChart(2, 3)
    s = base.length / 2.0
    t = math.sin(s) ** 2
    assert eq.gauss_curvature(base, s) == pytest.approx(float(chart.kappa(t)), abs=1e-4)


# ---------------------------------------------------------------------------
# flat torus
# ---------------------------------------------------------------------------

def test_flat_torus_invariants():
    base = eq.FlatTorusBase(length=1.0, radius=1.0)
    assert eq.area(base) == pytest.approx(2.0 * math.pi, rel=1e-14)
    assert eq.gauss_bonnet_check(base) == 0.0
    assert eq.gauss_curvature(base, 0.3) == 0.0
    assert eq.chi_orb(base) == 0.0


def test_flat_torus_validation():
    with pytest.raises(ValueError):
        eq.FlatTorusBase(length=-1.0, radius=1.0)


# ---------------------------------------------------------------------------
# invariance properties
# ---------------------------------------------------------------------------

def test_gauss_bonnet_constructor_sweep(torus_metric):
    for m1, m2 in COPRIME_PAIRS:
        base = eq.wps_profile(m1, m2)
        assert eq.gauss_bonnet_check(base) == pytest.approx(eq.chi_orb(base), abs=1e-6)
    assert eq.gauss_bonnet_check(torus_metric.base) == pytest.approx(0.0, abs=1e-12)


def test_area_and_gb_stable_under_grid_refinement():
    base = eq.wps_profile(2, 3)
    fine = QuadratureConfig(panels=64, points_per_panel=24)
    a0, a1 = eq.area(base), eq.area(base, fine)
    assert abs(a1 - a0) <= 1e-8 * abs(a0)
    g0, g1 = eq.gauss_bonnet_check(base), eq.gauss_bonnet_check(base, fine)
    assert abs(g1 - g0) <= 1e-7


def test_metric_scaling_of_base():
    base = eq.wps_profile(2, 3)
    for c in (0.5, 2.0, 10.0):
        scaled = eq.scale_base(base, c)
        assert eq.area(scaled) == pytest.approx(c * c * eq.area(base), rel=1e-10)
        assert eq.gauss_bonnet_check(scaled) == pytest.approx(
            eq.gauss_bonnet_check(base), abs=1e-6
        )
    torus = eq.FlatTorusBase(length=1.0, radius=1.0)
    assert eq.area(eq.scale_base(torus, 3.0)) == pytest.approx(9.0 * eq.area(torus), rel=1e-14)


# ---------------------------------------------------------------------------
# sampled profiles
# ---------------------------------------------------------------------------

def test_bump_sphere_profile():
    base = bump_sphere(0.15)
    assert eq.gauss_bonnet_check(base) == pytest.approx(2.0, abs=1e-6)
    assert eq.area(base) > 4.0 * math.pi / 2.0


def test_profile_from_samples_recovers_sphere():
    s = np.linspace(0.0, math.pi, 801)
    base = eq.profile_from_samples(s, np.sin(s), 1, 1)
    assert eq.area(base) == pytest.approx(4.0 * math.pi, rel=1e-8)
    assert eq.gauss_bonnet_check(base) == pytest.approx(2.0, abs=1e-5)
    # series-based second derivative stays close to the true curvature at poles
    assert eq.gauss_curvature(base, 0.01) == pytest.approx(1.0, abs=1e-2)


def test_profile_from_samples_validation():
    s = np.linspace(0.0, 1.0, 32)
    with pytest.raises(ValueError):
        eq.profile_from_samples(s, np.ones_like(s), 1, 1)  # no pole zeros
    phi = np.sin(np.pi * s)
    with pytest.raises(GridTooCoarse):
        # slopes are pi, not matching cone orders (1, 1) at slope 1
        eq.profile_from_samples(s, phi, 1, 1)
