"""Reduced rate integrals, decrease ratios and the region oracle.

Reference values were computed with mpmath at 30 significant digits.
"""

import json
import math
import warnings
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weakpair import rates, transition
from weakpair.quadrature import beta
from weakpair.rates import (
    PREFACTORS,
    QuadratureError,
    ResolutionWarning,
    arctan_integrand,
    avg_rate_1p1_quadrature,
    avg_rate_coefficient_1p1_massless,
    decrease_rate,
    log_argument,
    mean_transition_time_1p1,
    rate_coefficient,
    rate_coefficient_2p1,
    rate_coefficient_3p1,
    rate_deficit,
    rate_difference_1p1,
    rate_region_oracle,
    schwinger_exact_coefficient,
    small_mass_scaling,
    upper_bound_u,
)

GOLDEN = json.loads((Path(__file__).parent / "golden" / "small_mass_coefficients.json").read_text())

# A: (u, C2, C3)
MPMATH = {
    0.0: (1.0, 0.59907011736779610372, 0.39269908169872415481),
    0.01: (0.99005049366383278, 0.59471814785303141007, 0.38879826924994485726),
    0.1: (0.90543023072932404, 0.55730308398254452873, 0.35603167957721692760),
    0.375: (0.70710678118654752, 0.46460146305176377955, 0.27964027794998121624),
    1.0: (0.48586827175664568, 0.34536219546815132718, 0.18808042034392627212),
}


@pytest.mark.parametrize("A", sorted(MPMATH))
def test_coefficients_match_mpmath(A):
    u, c2, c3 = MPMATH[A]
    assert upper_bound_u(A) == pytest.approx(u, rel=1e-15)
    assert rate_coefficient_2p1(A, 1e-10).coefficient == pytest.approx(c2, abs=1e-10)
    assert rate_coefficient_3p1(A, 1e-10).coefficient == pytest.approx(c3, abs=1e-10)


def test_massless_closed_forms():
    assert rate_coefficient_2p1(0.0, 1e-8).coefficient == pytest.approx(beta(0.5, 0.75) / 4, abs=1e-7)
    assert rate_coefficient_3p1(0.0, 1e-8).coefficient == pytest.approx(math.pi / 8, abs=1e-7)


def test_error_estimate_respects_tolerance():
    for dim in (2, 3):
        res = rate_coefficient(dim, 0.3, 1e-9)
        assert res.abs_error_estimate <= 1e-9
        assert res.dim == dim and res.within_validity


def test_upper_bound_examples():
    assert upper_bound_u(0.0) == 1.0
    assert upper_bound_u(0.375) == pytest.approx(1 / math.sqrt(2), rel=1e-15)
    # the large-A form is stable: u ~ 1/(2 sqrt(A))
    assert upper_bound_u(100.0) == pytest.approx(0.05, rel=1e-4)
    assert upper_bound_u(1e12) == pytest.approx(0.5e-6, rel=1e-12)


@given(st.floats(0.0, 100.0))
@settings(max_examples=200, deadline=None)
def test_endpoint_identities(A):
    u = upper_bound_u(A)
    assert u**4 + 4 * A * u * u == pytest.approx(1.0, abs=1e-14)
    assert arctan_integrand(u, A) == 0.0
    assert log_argument(u, A) == pytest.approx(1.0, abs=1e-13)


def test_continuity_at_zero():
    for dim in (2, 3):
        c0 = rate_coefficient(dim, 0.0, 1e-10).coefficient
        assert abs(rate_coefficient(dim, 1e-8, 1e-10).coefficient - c0) < 1e-6


@given(st.floats(1e-6, 5.0))
@settings(max_examples=50, deadline=None)
def test_deficit_equals_difference(A):
    for dim in (2, 3):
        deficit, _ = rate_deficit(dim, A, 1e-10)
        diff = rate_coefficient(dim, 0.0, 1e-11).coefficient - rate_coefficient(dim, A, 1e-11).coefficient
        assert deficit == pytest.approx(diff, abs=5e-10)


@given(st.floats(0.0, 50.0), st.floats(0.0, 50.0))
@settings(max_examples=60, deadline=None)
def test_coefficients_decrease_in_A(a, b):
    lo, hi = sorted((a, b))
    if hi - lo < 1e-6:
        return
    for dim in (2, 3):
        assert rate_coefficient(dim, hi).coefficient < rate_coefficient(dim, lo).coefficient
        assert decrease_rate(dim, hi).delta_model > decrease_rate(dim, lo).delta_model


@given(st.sampled_from([1, 2, 3]), st.floats(0.0, 1e4))
@settings(max_examples=100, deadline=None)
def test_decrease_in_unit_interval(dim, A):
    d = decrease_rate(dim, A)
    assert 0.0 <= d.delta_model <= 1.0
    assert 0.0 <= d.delta_exact <= 1.0


def test_1p1_closed_forms():
    assert decrease_rate(1, 3 / 8).delta_model == pytest.approx(0.125, abs=1e-12)
    for A in (0.0, 0.2, 3.0):
        assert rate_difference_1p1(A) == pytest.approx(-0.5 * math.log(upper_bound_u(A)), abs=1e-14)
    assert avg_rate_coefficient_1p1_massless() == pytest.approx(1.38629436111989061883, abs=1e-15)
    assert avg_rate_1p1_quadrature() == pytest.approx(2 * math.log(2), abs=1e-10)
    assert mean_transition_time_1p1(0.0) == 0.5
    assert mean_transition_time_1p1(1.0) == 1.0
    with pytest.raises(ValueError):
        mean_transition_time_1p1(1.5)


def test_1p1_small_A():
    A = 1e-8
    assert decrease_rate(1, A).delta_model == pytest.approx(A / (4 * math.log(2)), rel=1e-12)


def test_1p1_has_no_coefficient():
    with pytest.raises(ValueError):
        rate_coefficient(1, 0.1)


@pytest.mark.parametrize("dim", [1, 2, 3])
def test_small_mass_limits(dim):
    A = 1e-6
    ratio = decrease_rate(dim, A, 1e-10).delta_model / A
    assert ratio == pytest.approx(GOLDEN["small_A_limits"][str(dim)], rel=2e-6)


@pytest.mark.parametrize("dim", [1, 2, 3])
def test_golden_small_mass_coefficients(dim):
    fit = small_mass_scaling(dim, 1e-3, 1e-2, 15)
    assert fit.coefficient == pytest.approx(GOLDEN["coefficients"][str(dim)], rel=1e-6)
    assert fit.slope == pytest.approx(2.0, abs=0.05)


def test_exact_coefficient():
    assert schwinger_exact_coefficient(3, 0.0) == 1.0
    assert schwinger_exact_coefficient(2, 1.0) == pytest.approx(math.exp(-math.pi))
    assert decrease_rate(1, 1e-6).delta_exact == pytest.approx(3.14158771879e-06, rel=1e-10)


@pytest.mark.parametrize("dim", [2, 3])
@pytest.mark.parametrize("A", [0.0, 0.01, 0.1, 1.0])
def test_region_oracle(dim, A):
    assert rate_region_oracle(dim, A) == pytest.approx(rate_coefficient(dim, A).coefficient, abs=1e-3)


def test_oracle_tracks_admission_bound(monkeypatch):
    base = rate_region_oracle(2, 0.1)
    monkeypatch.setattr(transition, "ADMISSION_BOUND", 0.25)
    assert abs(rate_region_oracle(2, 0.1) - base) > 1e-2


def test_oracle_guards():
    with pytest.raises(ValueError):
        rate_region_oracle(2, 0.1, n_cells=100)
    with pytest.raises(ValueError):
        rate_region_oracle(1, 0.1)
    with warnings.catch_warnings():
        warnings.simplefilter("error", ResolutionWarning)
        rate_region_oracle(3, 0.5, tol=1e-4)
    with pytest.warns(ResolutionWarning):
        rate_region_oracle(3, 0.5, tol=1e-14)


def test_input_validation():
    for bad in (-1.0, math.nan, math.inf):
        with pytest.raises(ValueError):
            rate_coefficient_2p1(bad)
    with pytest.raises(ValueError):
        rate_coefficient_3p1(0.1, tol=0.0)
    with pytest.raises(ValueError):
        decrease_rate(4, 0.1)


def test_quadrature_failure_raises(monkeypatch):
    from weakpair.quadrature import QuadratureResult

    monkeypatch.setattr(rates, "integrate", lambda *a, **k: QuadratureResult(0.0, 1.0, 10, False))
    with pytest.raises(QuadratureError) as info:
        rate_coefficient_3p1(0.2)
    assert info.value.achieved_error == 1.0


def test_prefactors():
    assert PREFACTORS[1].constant == pytest.approx(1 / (2 * math.pi))
    assert PREFACTORS[2].constant == pytest.approx(1 / (4 * math.pi**2))
    assert PREFACTORS[3].constant == pytest.approx(1 / (4 * math.pi**3))
    assert PREFACTORS[3].unit == "m^-3 s^-1"
