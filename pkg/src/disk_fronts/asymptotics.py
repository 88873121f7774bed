"""Closed-form and integral models of the front length at large times."""

from dataclasses import dataclass
import math

import numpy as np

from . import quadrature
from ._validation import check_positive, check_source_distance

SERIES_PREFACTOR = 8.0 * math.sqrt(2.0) / math.pi ** 2


@dataclass(frozen=True)
class ModelParams:
    a: float
    N: int = 10
    quad_tol: float = 1e-8

    def __post_init__(self):
        object.__setattr__(self, "a", check_source_distance(self.a))
        if int(self.N) != self.N or self.N < 0:
            raise ValueError("N must be a non-negative integer")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "quad_tol", check_positive("quad_tol", self.quad_tol))


def lambda_slope(a):
    """Asymptotic growth rate of the front length, ``2 arcsin(a)``."""
    return 2.0 * math.asin(check_source_distance(a))


def psi(theta):
    """Period-1 sawtooth equal to ``|2 theta - 1|`` on [0, 1]."""
    frac = np.mod(theta, 1.0)
    out = np.abs(2.0 * frac - 1.0)
    return float(out) if np.ndim(out) == 0 else out


class SawtoothPsi:
    """Callable wrapper around :func:`psi` (period 1, mean 1/2)."""

    period = 1.0
    mean = 0.5

    def __call__(self, theta):
        return psi(theta)

    def __repr__(self):
        return "SawtoothPsi()"


def fourier_coefficients_psi(n):
    """Coefficient of ``exp(2 i pi n theta)`` in the Fourier series of ``psi``."""
    n = int(n)
    if n == 0:
        return 0.5
    if n % 2 == 0:
        return 0.0
    return 2.0 / (math.pi ** 2 * n * n)


def psi_partial_sum(theta, n_max):
    """Fourier partial sum of ``psi`` over harmonics ``|n| <= n_max`` (real form)."""
    theta = np.asarray(theta, dtype=float)
    out = np.full(theta.shape, 0.5)
    for n in range(1, n_max + 1, 2):
        out = out + 2.0 * fourier_coefficients_psi(n) * np.cos(2.0 * math.pi * n * theta)
    return out


def theta2(a, xi, sign):
    """``1/2 +- sqrt(a^2 - cos^2 xi) / (2 sin xi)``; requires ``cos^2 xi <= a^2``."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    xi = np.asarray(xi, dtype=float)
    gap = a * a - np.cos(xi) ** 2
    # cos(xi) carries an absolute rounding error of a few eps, so near the
    # interval ends the gap is only known to within about 2 a * 4 eps
    noise = 8.0 * np.finfo(float).eps * max(a, np.finfo(float).tiny)
    if np.any(gap < -max(noise, 1e-14)):
        raise ValueError("xi outside [pi/2 - arcsin a, pi/2 + arcsin a]")
    gap = np.where(gap <= noise, 0.0, gap)
    out = 0.5 + sign * np.sqrt(gap) / (2.0 * np.sin(xi))
    return float(out) if out.ndim == 0 else out


def j_term(a, n, t):
    """Oscillating correction of index ``n`` (amplitude ~ (2n+1)^-5/2 t^-1/2)."""
    m = 2 * int(n) + 1
    t = np.asarray(t, dtype=float)
    out = (-SERIES_PREFACTOR / (m ** 2.5 * np.sqrt(t))
           * math.cos(m * math.pi * a) * np.cos(math.pi * (m * t + 0.25)))
    return float(out) if out.ndim == 0 else out


def j_term_bound(n, t):
    """Upper bound on ``|j_term(a, n, t)|`` valid for every ``a``."""
    m = 2 * np.asarray(n, dtype=float) + 1
    out = SERIES_PREFACTOR / (m ** 2.5 * np.sqrt(t))
    return float(out) if np.ndim(out) == 0 else out


def length_model_series(params, t):
    """Linear law plus ``N + 1`` oscillating terms, ``2 arcsin(a) t + t sum_n J_n(t)``."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("t must be positive")
    total = np.zeros_like(t)
    if math.cos(math.pi * params.a) != 0.0:
        for n in range(params.N + 1):
            total = total + j_term(params.a, n, t)
    out = lambda_slope(params.a) * t + t * total
    return float(out) if out.ndim == 0 else out


def series_tail_bound(n_from, n_to, t):
    """Bound on ``|t * sum_{n_from < n <= n_to} J_n(t)|``."""
    n = np.arange(n_from + 1, n_to + 1)
    return float(t * np.sum(j_term_bound(n, t)))


# --------------------------------------------------------------------------
# integral models: piecewise-linear psi integrated between its kinks


def _kinks(w, lo, hi, n_grid):
    """Points in [lo, hi] where ``w`` crosses an integer.

    Bracketed on a uniform grid (at most one crossing per level and cell is
    assumed) and refined by bisection to machine resolution.
    """
    grid = np.linspace(lo, hi, n_grid + 1)
    fl = np.floor(w(grid))
    cells = []
    levels = []
    d = np.diff(fl)
    for i in np.nonzero(d)[0]:
        lev = np.arange(min(fl[i], fl[i + 1]) + 1, max(fl[i], fl[i + 1]) + 1)
        cells.append(np.full(lev.size, i))
        levels.append(lev)
    if not cells:
        return np.empty(0)
    cells = np.concatenate(cells)
    levels = np.concatenate(levels)
    left, right = grid[cells], grid[cells + 1]
    left_below = w(left) < levels
    for _ in range(60):
        mid = 0.5 * (left + right)
        below = w(mid) < levels
        move = below == left_below
        left = np.where(move, mid, left)
        right = np.where(move, right, mid)
    return np.sort(0.5 * (left + right))


def _integrate_between(f, edges, tol):
    edges = np.unique(edges)
    value, _ = quadrature.integrate(lambda x, lab: f(x), edges[:-1], edges[1:], tol)
    return float(value)


def _grid_for(a, t):
    alpha0 = math.asin(a)
    span = t * (1.0 / math.cos(alpha0) - 1.0) + 2.0 * a + 2.0
    return int(min(max(4096, 64 * span), 1 << 21))


def length_model_integral_xi(a, t, quad_tol=1e-8):
    """``t * sum_pm integral over [pi/2 - alpha0, pi/2 + alpha0]`` of ``psi(theta2 - t / (2 sin xi))``.

    The integrand is symmetric about ``pi/2``; on the right half we substitute
    ``xi = pi/2 + alpha0 (1 - v^2)`` to absorb the square-root endpoint behaviour
    of ``theta2`` and split at every kink of ``psi``.
    """
    a = check_source_distance(a)
    t = check_positive("t", t)
    quad_tol = check_positive("quad_tol", quad_tol)
    if a == 0.0:
        return 0.0
    alpha0 = math.asin(a)
    n_grid = _grid_for(a, t)
    total = 0.0
    for sign in (1, -1):
        def arg(v, sign=sign):
            xi = 0.5 * math.pi + alpha0 * (1.0 - v * v)
            s = np.sin(xi)
            root = np.sqrt(np.maximum(a * a - np.cos(xi) ** 2, 0.0))
            return 0.5 + sign * root / (2.0 * s) - t / (2.0 * s)

        def integrand(v, arg=arg):
            return psi(arg(v)) * 2.0 * alpha0 * v

        edges = np.concatenate([[0.0, 1.0], _kinks(lambda v: 2.0 * arg(v), 0.0, 1.0, n_grid)])
        total += 2.0 * _integrate_between(integrand, edges, quad_tol / (4.0 * t))
    return t * total


def length_model_integral_alpha(a, t, quad_tol=1e-8):
    """Same model written over the launch-angle circle.

    The weight is ``|a cos(alpha)| / sqrt(1 - a^2 sin^2 alpha)``, the Jacobian of
    ``cos(xi) = a sin(alpha)``; each half of the circle covers the chord-angle
    interval once.
    """
    a = check_source_distance(a)
    t = check_positive("t", t)
    quad_tol = check_positive("quad_tol", quad_tol)
    if a == 0.0:
        return 0.0

    def arg(x):
        return 0.5 - (a * np.cos(x) + t) / (2.0 * np.sqrt(1.0 - (a * np.sin(x)) ** 2))

    def integrand(x):
        root = np.sqrt(1.0 - (a * np.sin(x)) ** 2)
        return psi(arg(x)) * np.abs(a * np.cos(x)) / root

    n_grid = _grid_for(a, t)
    edges = np.concatenate([[0.0, 0.5 * math.pi, math.pi],
                            _kinks(lambda x: 2.0 * arg(x), 0.0, math.pi, n_grid)])
    return t * 2.0 * _integrate_between(integrand, edges, quad_tol / (2.0 * t))
