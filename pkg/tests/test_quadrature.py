import math

import numpy as np
import pytest

from disk_fronts.exceptions import QuadratureError
from disk_fronts.quadrature import gauss_kronrod, integrate


def test_gauss_kronrod_exact_for_polynomials():
    value, err, _ = gauss_kronrod(lambda x, lab: x ** 10, np.array([0.0]), np.array([1.0]),
                                  np.array([0]))
    assert value[0] == pytest.approx(1 / 11, abs=1e-15)
    assert err[0] < 1e-14


def test_integrate_many_intervals_at_once():
    lo = np.array([0.0, 1.0, 2.0])
    hi = np.array([1.0, 2.0, math.pi])
    value, err = integrate(lambda x, lab: np.sin(x), lo, hi, 1e-12)
    assert value == pytest.approx(1.0 - math.cos(math.pi), abs=1e-12)
    assert err <= 1e-12


def test_kink_resolved_by_adaptivity():
    value, _ = integrate(lambda x, lab: np.abs(x - 0.3), np.array([0.0]), np.array([1.0]), 1e-10)
    assert value == pytest.approx(0.5 * (0.09 + 0.49), abs=1e-10)


def test_labels_select_integrand():
    scale = np.array([1.0, 2.0])
    value, _ = integrate(lambda x, lab: scale[lab] * x, np.zeros(2), np.ones(2), 1e-12,
                         labels=np.arange(2))
    assert value == pytest.approx(1.5, abs=1e-14)


def test_failure_carries_partial_value():
    with pytest.raises(QuadratureError) as info:
        integrate(lambda x, lab: np.sin(1.0 / np.maximum(x, 1e-300)), np.array([0.0]),
                  np.array([1.0]), 1e-14, max_intervals=200)
    assert np.isfinite(info.value.value)
    assert info.value.error > 1e-14
