"""Front length inside radial regions, simulated and asymptotic."""

from dataclasses import dataclass
import math

import numpy as np
from scipy import integrate as sp_integrate

from ._validation import check_positive, check_source_distance
from .billiard import as_source, flow
from .wavefront import (
    cut_points, decompose, length_between, smooth_intervals, split_intervals,
)


@dataclass(frozen=True)
class RadialRegion:
    """Annulus ``r_lo <= |x| <= r_hi`` (a disk when ``r_lo == 0``)."""

    r_lo: float
    r_hi: float

    def __post_init__(self):
        if not 0.0 <= self.r_lo < self.r_hi <= 1.0:
            raise ValueError("region bounds must satisfy 0 <= r_lo < r_hi <= 1")

    def contains(self, r):
        return (r >= self.r_lo) & (r <= self.r_hi)

    def owns(self, r):
        """Half-open membership ``r_lo <= r < r_hi`` (closed at the unit circle).

        Adjacent annuli own disjoint sets of radii, so lengths measured with
        this test add up exactly even where the front is tangent to a level.
        """
        return (r >= self.r_lo) & ((r < self.r_hi) | (self.r_hi == 1.0))


FULL_DISK = RadialRegion(0.0, 1.0)


def psi_density(r, a):
    """Asymptotic front density ``min(r, a) / sqrt(1 - min(r, a)^2)``."""
    a = check_source_distance(a)
    m = np.minimum(np.asarray(r, dtype=float), a)
    out = m / np.sqrt(1.0 - m * m)
    return float(out) if out.ndim == 0 else out


def _radial_moment(r, a):
    """Antiderivative of ``psi_density(r) * r`` vanishing at 0."""
    r = min(r, 1.0)
    if r <= a:
        return 0.5 * (math.asin(r) - r * math.sqrt(1.0 - r * r))
    const = a / math.sqrt(1.0 - a * a)
    return _radial_moment(a, a) + 0.5 * const * (r * r - a * a)


def model_length_in(region, a, t):
    """Large-time length of the front inside ``region``: ``(2t/pi) * integral of psi_density``."""
    a = check_source_distance(a)
    t = check_positive("t", t, allow_zero=True)
    moment = _radial_moment(region.r_hi, a) - _radial_moment(region.r_lo, a)
    return 4.0 * t * moment


def disk_integral_of_psi(a, epsabs=1e-13):
    """``(2/pi) * integral over the unit disk of psi_density``, by quadrature."""
    a = check_source_distance(a)
    value, _ = sp_integrate.quad(lambda r: psi_density(r, a) * r, 0.0, 1.0,
                                 points=[a] if 0.0 < a < 1.0 else None,
                                 epsabs=epsabs, epsrel=1e-13, limit=200)
    return 4.0 * value


def _interval_samples(a, t, lo, hi, k, spacing):
    """Launch-angle samples per interval, roughly ``spacing`` apart along the front."""
    coarse = np.linspace(0.0, 1.0, 65)
    al = lo[:, None] + (hi - lo)[:, None] * coarse[None, :]
    x, y, _, _, _ = flow(a, al, t, k[:, None])
    rough = np.hypot(np.diff(x, axis=1), np.diff(y, axis=1)).sum(axis=1)
    m = 64 + np.ceil(rough / spacing).astype(np.int64)
    owner = np.repeat(np.arange(lo.size), m + 1)
    start = np.repeat(np.cumsum(m + 1) - (m + 1), m + 1)
    frac = (np.arange(owner.size) - start) / np.repeat(m, m + 1)
    return lo[owner] + (hi - lo)[owner] * frac, owner


def simulated_length_in(region, src, t, quad_tol=1e-8, tol_alpha=1e-12, spacing=2e-3,
                        closed=True):
    """Front length inside ``region`` at time ``t``.

    The smooth (cusp-free) intervals of the front are further cut where the
    front radius crosses ``r_lo`` or ``r_hi``, bracketed on samples about
    ``spacing`` apart along the front and refined by bisection to
    ``tol_alpha``. Sampling each cusp-free interval separately keeps the two
    crossings on either side of a cusp apart. The speed is then integrated over
    the sub-intervals lying inside the region.

    With ``closed=False`` membership is half-open (see :meth:`RadialRegion.owns`),
    which makes lengths over a partition into annuli additive.
    """
    a = as_source(src).a
    t = check_positive("t", t, allow_zero=True)
    dec = decompose(a, t, tol_alpha)
    lo, hi, k = smooth_intervals(a, t, dec)

    levels = [r for r in (region.r_lo, region.r_hi) if 0.0 < r < 1.0]
    cuts, owners = [], []
    if levels and t > 0:
        alphas, owner = _interval_samples(a, t, lo, hi, k, spacing)
        for level in levels:
            def excess(x, kk, level=level):
                x_, y_, _, _, _ = flow(a, x, t, kk)
                return np.hypot(x_, y_) - level
            roots, own = cut_points(alphas, owner, k, excess, tol_alpha)
            cuts.append(roots)
            owners.append(own)
    lo, hi, k = split_intervals(lo, hi, k, cuts, owners)
    # majority over three interior points: a single probe can land on a
    # tangential touch of a level (e.g. the symmetric ray at alpha = pi)
    votes = 0
    for frac in (0.25, 0.5, 0.75):
        mx, my, _, _, _ = flow(a, lo + frac * (hi - lo), t, k)
        r = np.hypot(mx, my)
        votes = votes + (region.contains(r) if closed else region.owns(r))
    inside = votes >= 2
    if not inside.any():
        return 0.0
    value, _ = length_between(a, t, lo[inside], hi[inside], k[inside], quad_tol)
    return float(value)


@dataclass(frozen=True)
class DensityRow:
    r_lo: float
    r_hi: float
    simulated: float
    model: float

    @property
    def rel_err(self):
        if self.model == 0.0:
            return float("nan")
        return abs(self.simulated / self.model - 1.0)


def density_report(a, t, width=0.1, quad_tol=1e-8):
    """Simulated versus model length over consecutive annuli of the given width."""
    src = as_source(a)
    n = int(round(1.0 / width))
    if n < 1 or abs(n * width - 1.0) > 1e-9:
        raise ValueError("annulus width must divide 1")
    edges = np.round(np.linspace(0.0, 1.0, n + 1), 12)
    rows = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        region = RadialRegion(float(lo), float(hi))
        rows.append(DensityRow(region.r_lo, region.r_hi,
                               simulated_length_in(region, src, t, quad_tol, closed=False),
                               model_length_in(region, src.a, t)))
    return rows
