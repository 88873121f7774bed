"""The wave front S_t as a closed curve parametrized by the launch angle.

The front map ``alpha -> position at time t`` is continuous but only piecewise
smooth: it has a corner wherever the reflection count of the ray jumps. The
length is integrated piece by piece over intervals of constant count.
"""

from dataclasses import dataclass
import math

import numpy as np

from . import quadrature
from ._validation import check_positive
from .billiard import (
    RayState, Source, as_source, chord_half_angle, first_impact, flow, flow_derivative,
    segment_index,
)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True, eq=False)
class FrontSample:
    """Front points on a grid of launch angles (arrays, one row per ray)."""

    source: Source
    t: float
    alphas: np.ndarray
    positions: np.ndarray
    directions: np.ndarray
    reflections: np.ndarray

    def __len__(self):
        return self.alphas.size

    @property
    def states(self):
        return [RayState(self.positions[i], self.directions[i], int(self.reflections[i]), self.t)
                for i in range(len(self))]


@dataclass(frozen=True, eq=False)
class PieceDecomposition:
    """Partition of [0, 2pi) into intervals of constant reflection count.

    ``pieces`` is an ``(m, 2)`` array of ``[alpha_lo, alpha_hi]`` and ``counts``
    the reflection count on each piece.
    """

    breakpoints: np.ndarray
    pieces: np.ndarray
    counts: np.ndarray

    def __iter__(self):
        for (lo, hi), c in zip(self.pieces, self.counts):
            yield float(lo), float(hi), int(c)

    def __len__(self):
        return self.counts.size


def impact_times(a, alpha, k):
    """Time at which the ray launched at ``alpha`` makes its ``k+1``-th impact."""
    t0, _ = first_impact(a, alpha)
    return t0 + 2.0 * k * np.sin(chord_half_angle(a, alpha))


def _grid_size(a, k_max):
    # g_k varies like 2 k a sin(alpha) cos(alpha); keep several samples per unit change
    return int(min(max(8192, 64 * k_max * a), 1 << 18))


def decompose(src, t, tol_alpha=1e-12):
    """Split the parameter circle at every angle where the reflection count jumps.

    For each impact index ``k`` the roots of ``impact_times(alpha, k) - t`` are
    bracketed on a uniform grid and refined by bisection to ``tol_alpha``.
    """
    a = as_source(src).a
    t = check_positive("t", t, allow_zero=True)
    tol_alpha = check_positive("tol_alpha", tol_alpha)

    breaks = []
    if a > 0.0 and t > 0.0:
        t_first_min = 1.0 - a
        k_max = int(math.floor((t - t_first_min) / (2.0 * math.sqrt(1.0 - a * a)))) + 1
        if k_max >= 0:
            n = _grid_size(a, k_max)
            grid = np.linspace(0.0, TWO_PI, n + 1)
            ks = np.arange(k_max + 1)[:, None]
            g = impact_times(a, grid[None, :], ks) - t
            left = g[:, :-1]
            right = g[:, 1:]
            kk, jj = np.nonzero(np.signbit(left) != np.signbit(right))
            lo, hi = grid[jj], grid[jj + 1]
            kf = ks[kk, 0]
            glo = left[kk, jj]
            while lo.size and np.max(hi - lo) > tol_alpha:
                mid = 0.5 * (lo + hi)
                gm = impact_times(a, mid, kf) - t
                same = np.signbit(gm) == np.signbit(glo)
                lo = np.where(same, mid, lo)
                glo = np.where(same, gm, glo)
                hi = np.where(same, hi, mid)
            breaks = 0.5 * (lo + hi)
    breaks = np.unique(np.mod(np.asarray(breaks, dtype=float), TWO_PI))

    if breaks.size == 0:
        pieces = np.array([[0.0, TWO_PI]])
    else:
        edges = breaks
        if edges[0] > 0.0:
            edges = np.concatenate([[0.0], edges])
        edges = np.concatenate([edges, [TWO_PI]])
        pieces = np.stack([edges[:-1], edges[1:]], axis=1)
        pieces = pieces[pieces[:, 1] > pieces[:, 0]]
    mids = pieces.mean(axis=1)
    counts = segment_index(a, mids, t) + 1
    return PieceDecomposition(breakpoints=breaks, pieces=pieces, counts=counts)


def signed_speed(a, alpha, t, k):
    """Front speed with a sign: ``direction x d(position)/d(alpha)``.

    Fronts stay orthogonal to the rays, so ``|signed_speed|`` is the speed and
    its simple zeros are the cusps of the front.
    """
    gx, gy = flow_derivative(a, alpha, t, k)
    _, _, dx, dy, _ = flow(a, alpha, t, k)
    return dx * gy - dy * gx


def bisect_brackets(func, lo, hi, tol):
    """Vectorized bisection of ``func`` on brackets ``[lo, hi]`` with a sign change."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    neg_lo = np.signbit(func(lo, np.arange(lo.size)))
    while lo.size and np.max(hi - lo) > tol:
        mid = 0.5 * (lo + hi)
        neg_mid = np.signbit(func(mid, np.arange(lo.size)))
        move = neg_mid == neg_lo
        lo = np.where(move, mid, lo)
        hi = np.where(move, hi, mid)
    return 0.5 * (lo + hi)


def piece_grid(dec, n_probe):
    """``n_probe + 1`` equally spaced angles on every piece, flattened with owner index."""
    frac = np.linspace(0.0, 1.0, n_probe + 1)
    lo, hi = dec.pieces[:, 0], dec.pieces[:, 1]
    alphas = lo[:, None] + (hi - lo)[:, None] * frac[None, :]
    owner = np.repeat(np.arange(len(dec)), n_probe + 1)
    return alphas.ravel(), owner


def cut_points(alphas, owner, k_piece, func, tol):
    """Zeros of ``func(alpha, k)`` bracketed between consecutive samples of one piece."""
    vals = func(alphas, k_piece[owner])
    cell = np.nonzero((owner[:-1] == owner[1:])
                      & (np.signbit(vals[:-1]) != np.signbit(vals[1:])))[0]
    k_cell = k_piece[owner[cell]]
    roots = bisect_brackets(lambda x, i: func(x, k_cell[i]), alphas[cell], alphas[cell + 1], tol)
    return roots, owner[cell]


def split_intervals(lo, hi, k, cuts, owners):
    """Split intervals ``[lo[i], hi[i]]`` at the points ``cuts`` owned by ``i``.

    Returns ``(lo, hi, k)`` of the resulting sub-intervals, sorted by owner.
    """
    idx = np.arange(np.size(lo))
    cuts = np.concatenate([lo, hi, *cuts])
    owners = np.concatenate([idx, idx, *owners]).astype(np.int64)
    order = np.lexsort((cuts, owners))
    cuts, owners = cuts[order], owners[order]
    valid = (owners[:-1] == owners[1:]) & (cuts[1:] > cuts[:-1])
    own = owners[:-1][valid]
    return cuts[:-1][valid], cuts[1:][valid], np.asarray(k)[own]


def smooth_intervals(a, t, dec, n_probe=128, tol=1e-13):
    """Split each piece at the cusps of the front.

    Returns ``(lo, hi, k)`` arrays; the front speed is smooth on each interval.
    """
    k_piece = dec.counts - 1
    cuts, owners = [], []
    if t > 0 and a > 0:
        alphas, owner = piece_grid(dec, n_probe)
        roots, own = cut_points(alphas, owner, k_piece,
                                lambda x, k: signed_speed(a, x, t, k), tol)
        cuts.append(roots)
        owners.append(own)
    return split_intervals(dec.pieces[:, 0], dec.pieces[:, 1], k_piece, cuts, owners)


def _speed_integrand(a, t, k_of_interval):
    def speed(x, labels):
        gx, gy = flow_derivative(a, x, t, k_of_interval[labels])
        return np.hypot(gx, gy)
    return speed


def front_length(src, t, quad_tol=1e-8, tol_alpha=1e-12, return_error=False):
    """Length of the front at time ``t``: integral of the front speed over alpha.

    Pieces of constant reflection count are further split at the cusps of the
    front (zeros of :func:`signed_speed`), and each resulting interval is
    integrated with adaptive Gauss-Kronrod quadrature. The total absolute error
    estimate is kept below ``quad_tol``.
    """
    a = as_source(src).a
    t = check_positive("t", t, allow_zero=True)
    quad_tol = check_positive("quad_tol", quad_tol)
    dec = decompose(a, t, tol_alpha)
    lo, hi, k = smooth_intervals(a, t, dec)
    value, error = length_between(a, t, lo, hi, k, quad_tol)
    value = float(value)
    return (value, error) if return_error else value


def length_between(src, t, alpha_lo, alpha_hi, k, quad_tol):
    """Integrated front speed over ``[alpha_lo[i], alpha_hi[i]]`` on chord ``k[i]``."""
    a = as_source(src).a
    k = np.asarray(k, dtype=np.int64)
    return quadrature.integrate(_speed_integrand(a, float(t), k), alpha_lo, alpha_hi,
                                quad_tol, labels=np.arange(k.size))


def front_points(src, t, n):
    """Front at time ``t`` sampled on the uniform grid ``alpha_j = 2 pi j / n``."""
    src = as_source(src)
    if n < 1:
        raise ValueError("n must be at least 1")
    t = check_positive("t", t, allow_zero=True)
    alphas = TWO_PI * np.arange(n) / n
    x, y, dx, dy, k = flow(src.a, alphas, t)
    return FrontSample(source=src, t=t, alphas=alphas,
                       positions=np.stack([x, y], axis=1),
                       directions=np.stack([dx, dy], axis=1),
                       reflections=k + 1)


def polyline_length(src, t, n, refine=True, min_width=1e-10):
    """Length of the closed polygon through ``n`` uniformly spaced front points.

    With ``refine``, any grid interval whose end points have different
    reflection counts is bisected (inserting points) until the counts agree or
    the interval is narrower than ``min_width``.
    """
    a = as_source(src).a
    if n < 3:
        raise ValueError("n must be at least 3")
    t = check_positive("t", t, allow_zero=True)
    alphas = TWO_PI * np.arange(n + 1) / n
    x, y, _, _, k = flow(a, alphas, t)
    x[-1], y[-1], k[-1] = x[0], y[0], k[0]

    if refine:
        while True:
            todo = np.nonzero((k[:-1] != k[1:]) & (np.diff(alphas) > min_width))[0]
            if todo.size == 0:
                break
            mids = 0.5 * (alphas[todo] + alphas[todo + 1])
            mx, my, _, _, mk = flow(a, mids, t)
            alphas = np.insert(alphas, todo + 1, mids)
            x = np.insert(x, todo + 1, mx)
            y = np.insert(y, todo + 1, my)
            k = np.insert(k, todo + 1, mk)
    return float(np.sum(np.hypot(np.diff(x), np.diff(y))))
