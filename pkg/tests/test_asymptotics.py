import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from disk_fronts.analysis import growth_exponent
from disk_fronts.asymptotics import (
    ModelParams, SawtoothPsi, fourier_coefficients_psi, j_term, j_term_bound, lambda_slope,
    length_model_integral_alpha, length_model_integral_xi, length_model_series, psi,
    psi_partial_sum, series_tail_bound, theta2,
)
from disk_fronts.wavefront import front_length


def test_model_params_validation():
    assert ModelParams(0.3).N == 10
    with pytest.raises(ValueError):
        ModelParams(0.3, N=-1)
    with pytest.raises(ValueError):
        ModelParams(1.2)
    with pytest.raises(ValueError):
        ModelParams(0.3, quad_tol=0.0)


def test_lambda_slope_examples():
    assert lambda_slope(0.0) == 0.0
    assert lambda_slope(0.5) == pytest.approx(math.pi / 3, abs=1e-15)
    assert lambda_slope(1 - 1e-12) == pytest.approx(math.pi, abs=1e-5)


@pytest.mark.parametrize("theta, value", [(0.25, 0.5), (1.25, 0.5), (-0.5, 0.0), (0.0, 1.0),
                                          (0.5, 0.0)])
def test_psi_examples(theta, value):
    assert psi(theta) == pytest.approx(value, abs=1e-15)
    assert SawtoothPsi()(theta) == psi(theta)


@given(st.floats(-1e3, 1e3))
def test_psi_periodic_and_bounded(theta):
    assert 0.0 <= psi(theta) <= 1.0
    assert psi(theta) == pytest.approx(psi(theta + 1.0), abs=1e-9)


def test_psi_mean():
    from scipy.integrate import quad
    value, _ = quad(psi, 0.0, 1.0, points=[0.5], epsabs=1e-14)
    assert value == pytest.approx(0.5, abs=1e-12)
    assert SawtoothPsi.mean == 0.5


def test_theta2_examples():
    assert theta2(0.5, math.pi / 2, 1) == pytest.approx(0.75, abs=1e-15)
    assert theta2(0.5, math.pi / 2, -1) == pytest.approx(0.25, abs=1e-15)
    for a in (0.1, 0.5, 0.9):
        for edge in (math.pi / 2 - math.asin(a), math.pi / 2 + math.asin(a)):
            for sign in (1, -1):
                assert theta2(a, edge, sign) == pytest.approx(0.5, abs=1e-12)


def test_theta2_domain_violation():
    with pytest.raises(ValueError):
        theta2(0.3, 0.2, 1)
    with pytest.raises(ValueError):
        theta2(0.3, math.pi / 2, 0)


def test_j_term_examples():
    for n in range(5):
        assert j_term(0.5, n, 7.3) == pytest.approx(0.0, abs=1e-16)
    # exact: -8 sqrt2/pi^2 * cos(5 pi / 4) = 8 / pi^2
    assert j_term(0.0, 0, 1.0) == pytest.approx(8 / math.pi ** 2, rel=1e-14)


@given(st.floats(0.0, 0.999), st.integers(0, 100), st.floats(0.01, 1e4))
def test_j_term_bound(a, n, t):
    assert abs(j_term(a, n, t)) <= j_term_bound(n, t) * (1 + 1e-12)


def test_series_half_source_is_linear():
    assert length_model_series(ModelParams(0.5, 10), 30.0) == pytest.approx(10 * math.pi,
                                                                            abs=1e-12)


def test_series_tail_bound():
    t = 25.0
    diff = abs(length_model_series(ModelParams(0.9, 10), t)
               - length_model_series(ModelParams(0.9, 100), t))
    assert diff <= series_tail_bound(10, 100, t)


def test_series_requires_positive_time():
    with pytest.raises(ValueError, match="t must be positive"):
        length_model_series(ModelParams(0.3), 0.0)


def test_fourier_coefficients():
    assert fourier_coefficients_psi(0) == 0.5
    assert fourier_coefficients_psi(2) == 0.0
    assert fourier_coefficients_psi(1) == pytest.approx(2 / math.pi ** 2)
    assert fourier_coefficients_psi(-3) == fourier_coefficients_psi(3)
    grid = np.linspace(0.0, 1.0, 10 ** 4)
    # 25 terms: harmonics n = 1, 3, ..., 49
    assert np.max(np.abs(psi_partial_sum(grid, 49) - psi(grid))) < 0.01


def test_integral_model_vanishes_at_center():
    assert length_model_integral_xi(0.0, 10.0) == 0.0
    assert length_model_integral_alpha(0.0, 10.0) == 0.0
    assert abs(length_model_integral_xi(1e-6, 10.0)) < 1e-4


def test_integral_forms_agree_example():
    tol = 1e-8
    assert length_model_integral_xi(0.3, 20.0, tol) == pytest.approx(
        length_model_integral_alpha(0.3, 20.0, tol), abs=2 * tol)


def test_integral_forms_agree_random():
    rng = np.random.default_rng(11)
    tol = 1e-8
    for a, t in zip(rng.uniform(0.05, 0.95, 50), rng.uniform(1.0, 60.0, 50)):
        assert length_model_integral_xi(a, t, tol) == pytest.approx(
            length_model_integral_alpha(a, t, tol), abs=2 * tol)


def test_integral_model_matches_direct_quadrature():
    # reference: scipy quad on the unsubstituted xi-form
    from scipy.integrate import quad
    a, t = 0.4, 3.0
    alpha0 = math.asin(a)

    def f(xi, sign):
        return psi(theta2(a, xi, sign) - t / (2 * math.sin(xi)))
    ref = sum(quad(f, math.pi / 2 - alpha0, math.pi / 2 + alpha0, args=(s,), limit=400,
                   epsabs=1e-13)[0] for s in (1, -1))
    assert length_model_integral_xi(a, t, 1e-10) == pytest.approx(t * ref, abs=1e-7)


@pytest.mark.parametrize("a, t", [(0.5, 50.0), (0.7, 35.0)])
def test_integral_model_within_band_of_simulation(a, t):
    assert abs(length_model_integral_xi(a, t) - front_length(a, t)) < 1.0


def test_integral_model_residual_bounded_for_half_source():
    t = np.arange(10.0, 50.0001, 0.25)
    diff = [length_model_integral_xi(0.5, x) - front_length(0.5, x, 1e-6) for x in t]
    assert growth_exponent(t, diff) < 0.25


@pytest.mark.parametrize("a", [
    pytest.param(0.1, marks=pytest.mark.xfail(
        strict=True, reason="pre-asymptotic at a=0.1 on [10,50]: slope about 0.26")),
    0.3, 0.7, 0.9])
def test_series_integral_consistency(a):
    t = np.arange(10.0, 50.0001, 0.1)
    integral = np.array([length_model_integral_xi(a, x) for x in t])
    series = length_model_series(ModelParams(a, 50), t)
    assert growth_exponent(t, integral - series) < 0.25

