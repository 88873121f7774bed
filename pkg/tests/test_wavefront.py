import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from disk_fronts.billiard import propagate_exact
from disk_fronts.wavefront import (
    decompose, front_length, front_points, length_between, polyline_length, smooth_intervals,
)

TWO_PI = 2 * math.pi


def count(a, alpha, t):
    return propagate_exact(a, alpha, t).reflections


def oracle_breakpoints(a, t, n=4000, tol=1e-12):
    """Scalar bisection on the reflection count of propagate_exact."""
    grid = np.linspace(0.0, TWO_PI, n + 1)
    counts = [count(a, x, t) for x in grid]
    out = []
    for i in range(n):
        if counts[i] != counts[i + 1]:
            lo, hi, c_lo = grid[i], grid[i + 1], counts[i]
            while hi - lo > tol:
                mid = 0.5 * (lo + hi)
                if count(a, mid, t) == c_lo:
                    lo = mid
                else:
                    hi = mid
            out.append(0.5 * (lo + hi))
    return np.array(out)


def test_decompose_trivial_cases():
    d = decompose(0.0, 0.5)
    assert d.breakpoints.size == 0
    assert list(d) == [(0.0, TWO_PI, 0)]
    d = decompose(0.0, 1.5)
    assert d.breakpoints.size == 0
    assert list(d) == [(0.0, TWO_PI, 1)]


def test_decompose_near_side_reflects_first():
    d = decompose(0.5, 1.5)
    assert d.breakpoints.size >= 2


@pytest.mark.parametrize("a, t", [(0.5, 1.0), (0.3, 4.2), (0.8, 7.3)])
def test_breakpoints_match_bisection_oracle(a, t):
    d = decompose(a, t)
    ref = oracle_breakpoints(a, t)
    assert d.breakpoints.size == ref.size
    assert np.allclose(d.breakpoints, ref, atol=1e-11)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.0, 0.95), st.floats(0.0, 40.0))
def test_pieces_partition_circle_with_constant_counts(a, t):
    d = decompose(a, t)
    p = d.pieces
    assert p[0, 0] == 0.0 and p[-1, 1] == TWO_PI
    assert np.all(p[1:, 0] == p[:-1, 1])
    assert np.all(p[:, 1] > p[:, 0])
    for lo, hi, c in d:
        eps = min(1e-9, 0.25 * (hi - lo))
        for x in (0.5 * (lo + hi), lo + eps, hi - eps):
            assert count(a, x, t) == c


def test_breakpoint_count_bound():
    for a, t in [(0.3, 50.0), (0.9, 50.0)]:
        d = decompose(a, t)
        revolutions = t / (2 * math.sqrt(1 - a * a))
        assert d.breakpoints.size <= 2 * (2 + revolutions) * 2


@pytest.mark.parametrize("t", [0.5, 3.5])
def test_front_length_concentric(t):
    assert front_length(0.0, t) == pytest.approx(math.pi, abs=1e-10)


@pytest.mark.parametrize("t", [0.25, 0.7, 1.3])
def test_front_length_period_two_at_center(t):
    assert front_length(0.0, t) == pytest.approx(front_length(0.0, t + 2.0), abs=1e-9)


def test_front_length_half_source_near_linear_law():
    value = front_length(0.5, 50.0)
    assert abs(value - math.pi * 50 / 3) < 3.0
    assert value == pytest.approx(polyline_length(0.5, 50.0, 10 ** 6), abs=1e-4)


def test_front_length_reports_error_estimate():
    value, err = front_length(0.7, 20.0, quad_tol=1e-9, return_error=True)
    assert err <= 1e-9
    assert value == pytest.approx(front_length(0.7, 20.0, quad_tol=1e-12), abs=2e-9)


@pytest.mark.parametrize("a, t", [(0.3, 11.0), (0.9, 23.0)])
def test_front_symmetric_about_axis(a, t):
    lo, hi, k = smooth_intervals(a, t, decompose(a, t))
    lo_c, hi_c = np.minimum(lo, math.pi), np.minimum(hi, math.pi)
    keep = hi_c > lo_c
    half, _ = length_between(a, t, lo_c[keep], hi_c[keep], k[keep], 1e-10)
    assert 2 * half == pytest.approx(front_length(a, t, 1e-10), abs=1e-8)


def test_polyline_examples():
    assert polyline_length(0.0, 0.5, 1000) == pytest.approx(math.pi, abs=1e-5)
    assert polyline_length(0.3, 20.0, 10 ** 6) == pytest.approx(
        polyline_length(0.3, 20.0, 2 * 10 ** 6), abs=1e-4)
    assert polyline_length(0.5, 10.0, 10 ** 6) == pytest.approx(front_length(0.5, 10.0), abs=1e-4)


def test_polyline_rejects_small_n():
    with pytest.raises(ValueError):
        polyline_length(0.3, 1.0, 2)


@pytest.mark.parametrize("a", [0.1, 0.5, 0.9])
@pytest.mark.parametrize("t", [5.0, 20.0])
def test_polyline_converges_to_quadrature(a, t):
    exact = front_length(a, t, 1e-10)
    gaps = [abs(polyline_length(a, t, n) - exact) for n in (10 ** 3, 10 ** 4, 10 ** 5, 10 ** 6)]
    assert gaps[-1] < 1e-4
    assert gaps[-1] < gaps[0]
    assert all(later < 4 * earlier for earlier, later in zip(gaps, gaps[1:]))


def test_front_points_examples():
    f = front_points(0.5, 0.0, 4)
    assert np.allclose(f.positions, [[0.5, 0.0]] * 4)
    f = front_points(0.0, 1.0, 4)
    assert np.allclose(f.positions, [[1, 0], [0, 1], [-1, 0], [0, -1]], atol=1e-15)
    assert len(f.states) == 4


def test_front_points_match_propagate_exact():
    f = front_points(0.5, 10.0, 100000)
    assert len(f) == 100000
    assert np.all(np.diff(f.alphas) > 0)
    for i in (0, 123, 49999, 99999):
        s = propagate_exact(0.5, f.alphas[i], 10.0)
        assert np.allclose(f.positions[i], s.position, atol=1e-14)
        assert f.reflections[i] == s.reflections
