"""Fiber-length ladders: interior maximum, blow-up, collapse, exponent fits."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import eqyamabe as eq
from eqyamabe.errors import DegenerateData, InvalidCase, PositiveChi
from eqyamabe.scaling import (
    REGIME_DIVERGES,
    REGIME_INTERIOR_MAX,
    REGIME_SUP_ZERO,
    ScanTable,
)

from conftest import BLOWUP_COEF, SIGMA_S3, TORUS_J_ELL01, TORUS_LOWER_01


# ---------------------------------------------------------------------------
# ell_scan
# ---------------------------------------------------------------------------

def test_hopf_scan_peaks_at_one(hopf):
    ells = np.geomspace(0.25, 2.0, 13)
    table = eq.ell_scan(hopf.base, hopf.F, ells)
    assert table.regime == REGIME_INTERIOR_MAX
    peak = int(np.argmax(table.J))
    assert table.ell[peak] == pytest.approx(1.0, rel=1e-12)
    assert table.flags[peak] == "max"
    assert table.J[peak] == pytest.approx(SIGMA_S3, rel=1e-9)


def test_blowup_scan_flat_bundle(half_sphere):
    table = eq.ell_scan(half_sphere, 0.0, [1.0, 10.0, 100.0])
    assert table.regime == REGIME_DIVERGES
    assert np.all(np.diff(table.J) > 0.0)
    assert table.J[0] == pytest.approx(BLOWUP_COEF, rel=1e-9)
    assert table.J[2] == pytest.approx(BLOWUP_COEF * 100.0 ** (2.0 / 3.0), rel=1e-9)


def test_collapse_scan_torus(torus_metric):
    table = eq.ell_scan(torus_metric.base, torus_metric.F, [0.5, 0.1, 0.02])
    assert table.regime == REGIME_SUP_ZERO
    assert np.all(table.J < 0.0)
    assert table.J[np.where(table.ell == 0.1)[0][0]] == pytest.approx(
        TORUS_J_ELL01, rel=1e-9
    )
    assert table.lower is not None
    assert np.all(table.lower[~np.isnan(table.lower)] <= 0.0)
    # values sorted ascending in ell and J decaying to zero from below
    assert np.all(np.diff(np.abs(table.J)) > 0.0)


def test_scan_requires_positive_ells(hopf):
    with pytest.raises(ValueError):
        eq.ell_scan(hopf.base, hopf.F, [0.5, -1.0])
    with pytest.raises(ValueError):
        eq.ell_scan(hopf.base, hopf.F, [])


# ---------------------------------------------------------------------------
# collapse_bounds
# ---------------------------------------------------------------------------

def test_collapse_bounds_frozen_values(torus_metric):
    upper, lower = eq.collapse_bounds(torus_metric.base, torus_metric.F, 0.1)
    assert upper == pytest.approx(TORUS_J_ELL01, rel=1e-9)
    assert lower == pytest.approx(TORUS_LOWER_01, rel=1e-9)
    assert lower <= upper


def test_collapse_bounds_exponents(torus_metric):
    base, F = torus_metric.base, torus_metric.F
    ells = np.geomspace(0.01, 1.0, 7)
    uppers, lowers = zip(*(eq.collapse_bounds(base, F, l) for l in ells))
    up_fit = np.polyfit(np.log(ells), np.log(np.abs(uppers)), 1)[0]
    lo_fit = np.polyfit(np.log(ells), np.log(np.abs(lowers)), 1)[0]
    assert up_fit == pytest.approx(8.0 / 3.0, abs=1e-6)
    assert lo_fit == pytest.approx(2.0 / 3.0, abs=1e-6)


def test_collapse_bounds_zero_density():
    base = eq.FlatTorusBase(length=1.0, radius=1.0)
    upper, lower = eq.collapse_bounds(base, 0.0, 0.5)
    assert upper == 0.0
    assert lower == 0.0


def test_collapse_bounds_regime_errors(half_sphere, torus_metric):
    with pytest.raises(PositiveChi):
        eq.collapse_bounds(half_sphere, 2.0, 0.1)
    with pytest.raises(InvalidCase):
        eq.collapse_bounds(torus_metric.base, 1.0, 2.0)


# ---------------------------------------------------------------------------
# fit_exponent
# ---------------------------------------------------------------------------

def test_fit_exponent_collapse_table(torus_metric):
    table = eq.ell_scan(torus_metric.base, torus_metric.F, np.geomspace(0.02, 0.5, 6))
    exponent, coefficient = eq.fit_exponent(table)
    assert exponent == pytest.approx(8.0 / 3.0, abs=0.05)
    assert coefficient == pytest.approx(2.0 ** (1.0 / 3.0) * math.pi ** (4.0 / 3.0), rel=1e-6)


def test_fit_exponent_blowup_table(half_sphere):
    table = eq.ell_scan(half_sphere, 0.0, np.geomspace(1.0, 1e3, 10))
    exponent, _ = eq.fit_exponent(table)
    assert exponent == pytest.approx(2.0 / 3.0, abs=0.05)


def test_fit_exponent_constant_table():
    table = ScanTable(
        ell=np.geomspace(0.1, 10.0, 8),
        J=np.full(8, 3.7),
        lower=None,
        flags=[""] * 8,
        regime=REGIME_INTERIOR_MAX,
    )
    exponent, coefficient = eq.fit_exponent(table)
    assert exponent == pytest.approx(0.0, abs=1e-12)
    assert coefficient == pytest.approx(3.7, rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(
    exponent=st.floats(-4.0, 4.0),
    coefficient=st.floats(0.01, 100.0),
    sign=st.sampled_from([-1.0, 1.0]),
)
def test_fit_exponent_recovers_power_laws(exponent, coefficient, sign):
    ells = np.geomspace(0.05, 20.0, 9)
    table = ScanTable(
        ell=ells,
        J=sign * coefficient * ells**exponent,
        lower=None,
        flags=[""] * 9,
        regime=REGIME_INTERIOR_MAX,
    )
    fitted_exp, fitted_coef = eq.fit_exponent(table)
    assert fitted_exp == pytest.approx(exponent, abs=1e-9)
    assert fitted_coef == pytest.approx(coefficient, rel=1e-9)


def test_fit_exponent_degenerate():
    table = ScanTable(
        ell=np.array([1.0, 2.0, 3.0]),
        J=np.array([1.0, 2.0, 3.0]),
        lower=None,
        flags=[""] * 3,
        regime=REGIME_INTERIOR_MAX,
    )
    with pytest.raises(DegenerateData):
        eq.fit_exponent(table)


def test_scan_rows_structure(torus_metric):
    table = eq.ell_scan(torus_metric.base, torus_metric.F, [0.5, 0.1])
    rows = table.rows()
    assert len(rows) == 2
    ell0, J0, lower0, flag0 = rows[0]
    assert ell0 == 0.1  # sorted ascending
    assert lower0 is not None and lower0 < 0.0
    assert flag0 == "collapse"
