"""Leading-order stationary phase and boundary asymptotics, with a brute-force oracle.

Integrals have the form ``I(t) = integral of exp(i t S(x)) a(x) dx`` over an
interval or over one period of a periodic phase.
"""

from dataclasses import dataclass
from fractions import Fraction
import cmath
import math
from typing import Callable, Optional

import numpy as np

from . import quadrature
from .exceptions import DegenerateCriticalPointError

MORSE_THRESHOLD = 1e-8
FD_STEP = 1e-6
FD_STEP_SECOND = 1e-4


def _one(x):
    return np.ones_like(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class PhaseProblem:
    """Phase ``S``, amplitude and integration domain.

    Derivatives of ``S`` are optional; missing ones are replaced by central
    differences (step ``1e-6`` for ``S'``, ``1e-4`` for ``S''``), which costs
    roughly half the available digits.
    """

    S: Callable
    domain: tuple = (0.0, 1.0)
    amplitude: Callable = _one
    dS: Optional[Callable] = None
    d2S: Optional[Callable] = None
    periodic: bool = False

    @property
    def c(self):
        return float(self.domain[0])

    @property
    def d(self):
        return float(self.domain[1])

    def phase_derivative(self, x):
        if self.dS is not None:
            return self.dS(x)
        return (self.S(x + FD_STEP) - self.S(x - FD_STEP)) / (2.0 * FD_STEP)

    def phase_curvature(self, x):
        if self.d2S is not None:
            return self.d2S(x)
        if self.dS is not None:
            return (self.dS(x + FD_STEP) - self.dS(x - FD_STEP)) / (2.0 * FD_STEP)
        h = FD_STEP_SECOND
        return (self.S(x + h) - 2.0 * self.S(x) + self.S(x - h)) / (h * h)


@dataclass(frozen=True)
class CriticalPoint:
    x: float
    value: float
    curvature: float


def _scalar(f, x):
    return float(np.asarray(f(np.asarray(x, dtype=float))))


def critical_points(problem, tol=1e-12, n_scan=4096):
    """Simple zeros of ``S'`` in the domain: sign-change scan plus bisection.

    Raises DegenerateCriticalPointError if ``|S''| <= 1e-8`` at a zero.
    """
    c, d = problem.c, problem.d
    if problem.periodic:
        grid = c + (d - c) * np.arange(n_scan + 1) / n_scan
    else:
        grid = np.linspace(c, d, n_scan + 1)
    with np.errstate(all="ignore"):
        g = np.asarray(problem.phase_derivative(grid), dtype=float)
    if problem.periodic:
        g[-1] = g[0]

    roots = [grid[i] for i in np.nonzero(g == 0.0)[0]
             if not (problem.periodic and i == grid.size - 1)]
    finite = np.isfinite(g[:-1]) & np.isfinite(g[1:])
    cells = np.nonzero(finite & (g[:-1] * g[1:] < 0))[0]
    for i in cells:
        lo, hi, glo = grid[i], grid[i + 1], g[i]
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            gm = _scalar(problem.phase_derivative, mid)
            if gm == 0.0:
                lo = hi = mid
                break
            if (gm < 0) == (glo < 0):
                lo, glo = mid, gm
            else:
                hi = mid
        roots.append(0.5 * (lo + hi))

    points = []
    for x in sorted(roots):
        curv = _scalar(problem.phase_curvature, x)
        if abs(curv) <= MORSE_THRESHOLD:
            raise DegenerateCriticalPointError(f"degenerate critical point at x={x!r} (S''={curv:.3g})")
        points.append(CriticalPoint(float(x), _scalar(problem.S, x), curv))
    return points


def leading_term(problem, t, points=None):
    """Sum of the leading stationary-phase contributions of all critical points.

    Each point contributes ``sqrt(2 pi) exp(i eps pi/4) / |t S''|^(1/2) exp(i t S) a``
    with ``eps`` the sign of ``t S''``.
    """
    if t == 0:
        raise ValueError("t must be nonzero")
    if points is None:
        points = critical_points(problem)
    total = 0j
    for p in points:
        eps = math.copysign(1.0, t * p.curvature)
        amp = _scalar(problem.amplitude, p.x)
        total += (math.sqrt(2.0 * math.pi) * cmath.exp(1j * eps * math.pi / 4.0)
                  / math.sqrt(abs(t * p.curvature)) * cmath.exp(1j * t * p.value) * amp)
    return total


def boundary_term(problem, t):
    """Endpoint contribution ``(a(d) e^{itS(d)}/S'(d) - a(c) e^{itS(c)}/S'(c)) / (i t)``."""
    if problem.periodic:
        raise ValueError("a periodic problem has no boundary")
    if t == 0:
        raise ValueError("t must be nonzero")
    out = 0j
    for x, sign in ((problem.d, 1.0), (problem.c, -1.0)):
        slope = _scalar(problem.phase_derivative, x)
        if not math.isfinite(slope) or abs(slope) < 1e-12:
            raise ValueError(f"S' must not vanish at the endpoint x={x!r}")
        out += sign * _scalar(problem.amplitude, x) * cmath.exp(1j * t * _scalar(problem.S, x)) / slope
    return out / (1j * t)


def _panel_edges(problem, t, per_oscillation, n_probe=8192):
    """Panel edges such that every panel spans at most ``1/per_oscillation`` of a phase cycle."""
    c, d = problem.c, problem.d
    x = np.linspace(c, d, n_probe + 1)
    with np.errstate(all="ignore"):
        s = np.asarray(problem.S(x), dtype=float)
    dphase = np.abs(t) * np.abs(np.diff(s)) / (2.0 * math.pi)
    dphase = np.nan_to_num(dphase, nan=0.0, posinf=0.0)
    measure = np.concatenate([[0.0], np.cumsum(per_oscillation * dphase + 16.0 / n_probe)])
    n_panels = max(16, int(math.ceil(measure[-1])))
    return np.interp(np.linspace(0.0, measure[-1], n_panels + 1), measure, x)


def brute_force(problem, t, tol=1e-10):
    """Adaptive quadrature of the oscillatory integral.

    The domain is pre-split so that each 15-node panel covers at most half an
    oscillation of ``exp(i t S)`` (30 nodes per wavelength); panels are then
    refined adaptively until the absolute error estimate is below ``tol``, or
    below the rounding floor of the integrand when that is larger.
    """
    def integrand(x, _labels):
        return np.exp(1j * t * problem.S(x)) * problem.amplitude(x)

    edges = _panel_edges(problem, t, per_oscillation=2.0)
    with np.errstate(all="ignore"):
        s_max = np.nanmax(np.abs(problem.S(edges)))
        a_max = np.nanmax(np.abs(problem.amplitude(edges)))
    # exp(i t S) itself carries a relative error of about eps * |t S|
    floor = 64.0 * np.finfo(float).eps * (1.0 + abs(t) * s_max) * a_max * (problem.d - problem.c)
    value, _ = quadrature.integrate(integrand, edges[:-1], edges[1:], max(tol, floor))
    return complex(value)


@dataclass
class RemainderScan:
    """Scaled remainders ``sup_lambda |brute - leading| * t^(3/2)`` on a time grid."""

    t_grid: np.ndarray
    scaled: np.ndarray
    worst_lambda: np.ndarray

    @property
    def ratio(self):
        return float(np.max(self.scaled) / np.median(self.scaled))

    @property
    def bounded(self):
        return self.ratio <= 3.0


def uniform_remainder_scan(family, t_grid, lambda_grid, tol=1e-11):
    """Check that the stationary-phase remainder is uniformly ``O(t^-3/2)``.

    ``family(lam)`` returns a PhaseProblem. ``lambda_grid`` is either a sequence
    of parameters (the supremum is taken over it at every ``t``) or a callable
    ``t -> parameters`` for families whose parameter is tied to ``t``.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    scaled = np.empty(t_grid.size)
    worst = np.empty(t_grid.size)
    for i, t in enumerate(t_grid):
        lams = lambda_grid(t) if callable(lambda_grid) else lambda_grid
        best, arg = -1.0, float("nan")
        for lam in np.atleast_1d(lams):
            problem = family(float(lam))
            points = critical_points(problem)
            err = abs(brute_force(problem, t, tol) - leading_term(problem, t, points))
            if err > best:
                best, arg = err, float(lam)
        scaled[i] = best * t ** 1.5
        worst[i] = arg
    return RemainderScan(t_grid=t_grid, scaled=scaled, worst_lambda=worst)


# --------------------------------------------------------------------------
# ready-made problems


def smooth_bump(c, d):
    """C-infinity bump on ``(c, d)``, equal to 1 at the midpoint."""
    mid, half = 0.5 * (c + d), 0.5 * (d - c)

    def bump(x):
        y = (np.asarray(x, dtype=float) - mid) / half
        inside = np.abs(y) < 1.0
        out = np.zeros_like(y)
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - y[inside] ** 2))
        return out
    return bump


def bessel_problem():
    """``S = cos(2 pi x)`` over one period; ``I(t) = J0(t)``."""
    two_pi = 2.0 * math.pi
    return PhaseProblem(
        S=lambda x: np.cos(two_pi * x),
        dS=lambda x: -two_pi * np.sin(two_pi * x),
        d2S=lambda x: -two_pi ** 2 * np.cos(two_pi * x),
        domain=(0.0, 1.0), periodic=True,
    )


def linear_family(lam):
    """``S = cos(2 pi x) + lam sin(2 pi x)`` over one period."""
    two_pi = 2.0 * math.pi
    return PhaseProblem(
        S=lambda x: np.cos(two_pi * x) + lam * np.sin(two_pi * x),
        dS=lambda x: two_pi * (lam * np.cos(two_pi * x) - np.sin(two_pi * x)),
        d2S=lambda x: -two_pi ** 2 * (np.cos(two_pi * x) + lam * np.sin(two_pi * x)),
        domain=(0.0, 1.0), periodic=True,
    )


def front_phase_family(a):
    """Phase of the lowest oscillating term of the front length, ``lam = 1/t``.

    ``S_lam(xi) = -pi (1/sin xi - lam sqrt(a^2 - cos^2 xi)/sin xi)`` on the
    chord-angle interval, with a smooth bump amplitude vanishing at both ends.
    """
    alpha0 = math.asin(a)
    c, d = 0.5 * math.pi - alpha0, 0.5 * math.pi + alpha0
    bump = smooth_bump(c, d)

    def make(lam):
        def S(x):
            x = np.asarray(x, dtype=float)
            s = np.sin(x)
            root = np.sqrt(np.maximum(a * a - np.cos(x) ** 2, 0.0))
            return -math.pi * (1.0 - lam * root) / s

        def dS(x):
            x = np.asarray(x, dtype=float)
            s, co = np.sin(x), np.cos(x)
            root = np.sqrt(np.maximum(a * a - co ** 2, 0.0))
            # d/dx sqrt(a^2 - cos^2 x) = cos x sin x / root
            with np.errstate(divide="ignore", invalid="ignore"):
                droot = np.where(root > 0, co * s / root, np.inf)
            return -math.pi * ((-co / s ** 2) - lam * (droot * s - root * co) / s ** 2)

        return PhaseProblem(S=S, dS=dS, domain=(c, d), amplitude=bump)
    return make


# --------------------------------------------------------------------------
# J0 oracle


def _j0_ascending(x):
    q = Fraction(x) ** 2 / 4
    term = Fraction(1)
    total = Fraction(1)
    k = 0
    while True:
        k += 1
        term = -term * q / (k * k)
        total += term
        if abs(term) < Fraction(1, 10 ** 30) and k > q:
            return float(total)


def _j0_asymptotic(x):
    # Hankel expansion: J0 = sqrt(2/(pi x)) (P cos(x - pi/4) - Q sin(x - pi/4))
    p, q = 0.0, 0.0
    coef = 1.0
    last = math.inf
    k = 0
    while True:
        if k > 0:
            coef *= -((2 * k - 1) ** 2) / (k * 8.0 * x)
        size = abs(coef)
        if size > last or size < 1e-18:
            break
        last = size
        if k % 2 == 0:
            p += coef * (-1) ** (k // 2)
        else:
            q += coef * (-1) ** (k // 2)
        k += 1
    phase = x - math.pi / 4.0
    return math.sqrt(2.0 / (math.pi * x)) * (p * math.cos(phase) - q * math.sin(phase))


def bessel_j0(x):
    """Bessel function J0: exact ascending series up to 20, Hankel expansion beyond."""
    x = abs(float(x))
    if x <= 20.0:
        return _j0_ascending(x)
    return _j0_asymptotic(x)


# --------------------------------------------------------------------------
# self-check suites


def decay_slope(t_values, errors):
    """Least-squares slope of ``log(errors)`` against ``log(t)``."""
    slope, _ = np.polyfit(np.log(np.asarray(t_values, float)), np.log(np.asarray(errors, float)), 1)
    return float(slope)


def bessel_suite(t_values=None):
    """Leading-term error for ``J0`` on times where the next-order term peaks."""
    if t_values is None:
        t_values = 0.75 * math.pi + math.pi * np.round(np.geomspace(10, 1000, 8))
    problem = bessel_problem()
    points = critical_points(problem)
    errors = [abs(bessel_j0(t) - leading_term(problem, t, points).real) for t in t_values]
    return decay_slope(t_values, errors)


def fresnel_problem(sign=1):
    """``S = sign x^2 / 2`` with a bump amplitude on [-1, 1]."""
    return PhaseProblem(S=lambda x: sign * 0.5 * np.asarray(x, float) ** 2,
                        dS=lambda x: sign * np.asarray(x, float),
                        d2S=lambda x: sign * np.ones_like(np.asarray(x, float)),
                        domain=(-1.0, 1.0), amplitude=smooth_bump(-1.0, 1.0))


def fresnel_suite(t_values=(20.0, 40.0, 80.0, 160.0, 320.0)):
    """Leading-term error against brute force for both signs of the quadratic phase."""
    slopes = []
    for sign in (1, -1):
        problem = fresnel_problem(sign)
        errors = [abs(brute_force(problem, t) - leading_term(problem, t)) for t in t_values]
        slopes.append(decay_slope(t_values, errors))
    return max(slopes)


def monomial_problem():
    """``S = x^2`` on [1, 2], no critical point."""
    return PhaseProblem(S=lambda x: np.asarray(x, float) ** 2,
                        dS=lambda x: 2.0 * np.asarray(x, float),
                        d2S=lambda x: 2.0 * np.ones_like(np.asarray(x, float)),
                        domain=(1.0, 2.0))


def boundary_suite(t_values=None):
    """Boundary-formula error slope for ``x^2`` on [1, 2] and exactness for ``S = x``."""
    if t_values is None:
        t_values = np.geomspace(100, 1000, 10)
    problem = monomial_problem()
    errors = [abs(brute_force(problem, t) - boundary_term(problem, t)) for t in t_values]
    linear = PhaseProblem(S=lambda x: np.asarray(x, float), dS=lambda x: np.ones_like(x),
                          d2S=lambda x: np.zeros_like(x), domain=(0.0, 1.0))
    exact = max(abs(boundary_term(linear, t) - (cmath.exp(1j * t) - 1.0) / (1j * t))
                for t in (1.0, 10.0, 100.0))
    return decay_slope(t_values, errors), exact
