"""Ray propagation in the unit-disk billiard.

Every trajectory of the circular billiard is a sequence of congruent chords:
a ray launched from the source ``(a, 0)`` at angle ``alpha`` travels along chords
of half-angle ``xi = arccos(a sin(alpha))``, and consecutive impact points on
the circle advance by the angle ``2 xi``. The exact propagator uses this closed
form; :func:`propagate_stepped` is an explicit time-stepping scheme kept as an
independent check.

The vectorized helpers (``first_impact``, ``flow``, ``flow_derivative``) take
plain floats/arrays for the source distance and launch angles and are what the
rest of the package builds on.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from ._validation import check_source_distance
from .exceptions import BreakpointError

HALF_PI = 0.5 * math.pi


@dataclass(frozen=True)
class Source:
    """Point source at distance ``a`` from the disk center, placed at ``(a, 0)``."""

    a: float

    def __post_init__(self):
        object.__setattr__(self, "a", check_source_distance(self.a))

    @property
    def position(self):
        return np.array([self.a, 0.0])


@dataclass(frozen=True)
class RayState:
    position: np.ndarray
    direction: np.ndarray
    reflections: int
    time: float

    def __eq__(self, other):
        if not isinstance(other, RayState):
            return NotImplemented
        return (np.array_equal(self.position, other.position)
                and np.array_equal(self.direction, other.direction)
                and self.reflections == other.reflections
                and self.time == other.time)

    __hash__ = None


@dataclass(frozen=True)
class ChordGeometry:
    xi: float
    chord_length: float
    alpha: float


def as_source(src):
    return src if isinstance(src, Source) else Source(float(src))


# --------------------------------------------------------------------------
# vectorized closed-form flow


def first_impact(a, alpha):
    """Time ``t0`` to the first boundary hit and polar angle ``s0`` of that hit."""
    alpha = np.asarray(alpha, dtype=float)
    cos_a, sin_a = np.cos(alpha), np.sin(alpha)
    b = a * cos_a
    disc = np.sqrt(1.0 - a * a + b * b)
    # roots of t^2 + 2 b t + a^2 - 1 = 0; avoid cancellation when b > 0
    t0 = np.where(b > 0, (1.0 - a * a) / (b + disc), disc - b)
    s0 = np.arctan2(t0 * sin_a, a + t0 * cos_a)
    return t0, s0


def chord_half_angle(a, alpha):
    return np.arccos(np.clip(a * np.sin(np.asarray(alpha, dtype=float)), -1.0, 1.0))


def segment_index(a, alpha, t):
    """Index of the chord occupied at time ``t``; -1 before the first impact.

    A ray sitting exactly on the circle counts as already reflected.
    """
    t0, _ = first_impact(a, alpha)
    xi = chord_half_angle(a, alpha)
    tau = t - t0
    k = np.floor(tau / (2.0 * np.sin(xi)))
    return np.where(tau < 0, -1, k).astype(np.int64)


def flow(a, alpha, t, k=None):
    """Positions and directions of rays launched at ``alpha`` after time ``t``.

    ``k`` optionally pins the chord index (see :func:`segment_index`); this keeps
    the map smooth up to and including the ends of a piece of constant
    reflection count. Returns ``(x, y, dx, dy, k)``.
    """
    alpha = np.asarray(alpha, dtype=float)
    t0, s0 = first_impact(a, alpha)
    xi = chord_half_angle(a, alpha)
    chord = 2.0 * np.sin(xi)
    tau = t - t0
    if k is None:
        k = np.where(tau < 0, -1, np.floor(tau / chord)).astype(np.int64)
    k = np.array(np.broadcast_to(k, np.broadcast_shapes(alpha.shape, np.shape(k))))

    s = s0 + 2.0 * k * xi
    rho = tau - k * chord
    phi = s + xi + HALF_PI
    cphi, sphi = np.cos(phi), np.sin(phi)
    x = np.cos(s) + rho * cphi
    y = np.sin(s) + rho * sphi

    free = k < 0
    if np.any(free):
        ca, sa = np.cos(alpha), np.sin(alpha)
        x = np.where(free, a + t * ca, x)
        y = np.where(free, t * sa, y)
        cphi = np.where(free, ca, cphi)
        sphi = np.where(free, sa, sphi)
    return x, y, cphi, sphi, k


def flow_derivative(a, alpha, t, k):
    """Analytic ``d(position)/d(alpha)`` at fixed ``t`` on chord ``k``."""
    alpha = np.asarray(alpha, dtype=float)
    ca, sa = np.cos(alpha), np.sin(alpha)
    b = a * ca
    disc = np.sqrt(1.0 - a * a + b * b)
    t0 = np.where(b > 0, (1.0 - a * a) / (b + disc), disc - b)
    dt0 = a * sa * t0 / disc

    hx, hy = a + t0 * ca, t0 * sa
    dhx = dt0 * ca - t0 * sa
    dhy = dt0 * sa + t0 * ca
    s0 = np.arctan2(hy, hx)
    ds0 = (hx * dhy - hy * dhx) / (hx * hx + hy * hy)

    sin_xi = np.sqrt(1.0 - (a * sa) ** 2)
    xi = np.arccos(np.clip(a * sa, -1.0, 1.0))
    dxi = -a * ca / sin_xi

    chord = 2.0 * sin_xi
    dchord = 2.0 * (a * sa) * dxi  # 2 cos(xi) xi'
    s = s0 + 2.0 * k * xi
    ds = ds0 + 2.0 * k * dxi
    rho = (t - t0) - k * chord
    drho = -dt0 - k * dchord
    phi = s + xi + HALF_PI
    dphi = ds + dxi
    cphi, sphi = np.cos(phi), np.sin(phi)

    gx = -np.sin(s) * ds + drho * cphi - rho * sphi * dphi
    gy = np.cos(s) * ds + drho * sphi + rho * cphi * dphi
    free = k < 0
    gx = np.where(free, -t * sa, gx)
    gy = np.where(free, t * ca, gy)
    return gx, gy


# --------------------------------------------------------------------------
# scalar API


def chord_geometry(src, alpha):
    """Chord half-angle and chord length of the trajectory launched at ``alpha``."""
    a = as_source(src).a
    xi = math.acos(a * math.sin(alpha))
    return ChordGeometry(xi=xi, chord_length=2.0 * math.sin(xi),
                         alpha=float(alpha) % (2.0 * math.pi))


def reflect(position, direction, tol=1e-9):
    """Specular reflection of ``direction`` at the boundary point ``position``."""
    n = np.asarray(position, dtype=float)
    v = np.asarray(direction, dtype=float)
    if abs(math.hypot(n[0], n[1]) - 1.0) > tol:
        raise ValueError(f"reflection point must lie on the unit circle, |p| = {np.linalg.norm(n)!r}")
    n = n / np.linalg.norm(n)
    return v - 2.0 * np.dot(v, n) * n


def propagate_exact(src, alpha, t):
    """State of the ray launched from the source at angle ``alpha`` after time ``t``."""
    a = as_source(src).a
    if t < 0:
        raise ValueError("t must be non-negative")
    x, y, dx, dy, k = flow(a, float(alpha), float(t))
    return RayState(position=np.array([float(x), float(y)]),
                    direction=np.array([float(dx), float(dy)]),
                    reflections=int(k) + 1,
                    time=float(t))


def stepped_flow(a, alpha, t, dt):
    """Explicit time-stepping of many rays at once.

    Each step moves every point by ``dt``; a point that would leave the closed
    disk is first advanced to the circle, its velocity reflected about the
    normal, and the rest of the step completed along the new direction. The
    final step of each ray is shortened so that its total time is exactly its
    ``t``. ``a``, ``alpha`` and ``t`` broadcast against each other.
    Returns ``(M, V, reflections)`` as ``(n, 2)``, ``(n, 2)``, ``(n,)`` arrays.
    """
    a, alpha, t = (np.ravel(x) for x in np.broadcast_arrays(
        np.asarray(a, dtype=float), np.asarray(alpha, dtype=float), np.asarray(t, dtype=float)))
    M = np.stack([a, np.zeros_like(a)], axis=1)
    V = np.stack([np.cos(alpha), np.sin(alpha)], axis=1)
    count = np.zeros(alpha.size, dtype=np.int64)

    n_steps = int(math.ceil(np.max(t, initial=0.0) / dt))
    for i in range(n_steps):
        h = np.clip(t - i * dt, 0.0, dt)
        trial = M + h[:, None] * V
        out = np.einsum("ij,ij->i", trial, trial) > 1.0
        if not out.any():
            M = trial
            continue
        M[~out] = trial[~out]
        m, v, hh = M[out], V[out], h[out]
        b = np.einsum("ij,ij->i", m, v)
        c = np.einsum("ij,ij->i", m, m) - 1.0
        root = np.sqrt(np.maximum(b * b - c, 0.0))
        delta = np.where(b < 0, root - b, -c / (b + root))
        delta = np.clip(delta, 0.0, hh)
        m = m + delta[:, None] * v
        nrm = m / np.linalg.norm(m, axis=1)[:, None]
        v = v - 2.0 * np.einsum("ij,ij->i", v, nrm)[:, None] * nrm
        M[out] = m + (hh - delta)[:, None] * v
        V[out] = v
        count[out] += 1
    return M, V, count


def propagate_stepped(src, alpha, t, dt):
    """Time-stepped counterpart of :func:`propagate_exact`.

    ``dt`` must be shorter than the shortest chord ``2 sqrt(1 - a^2)`` so that
    a step contains at most one reflection.
    """
    a = as_source(src).a
    if t < 0:
        raise ValueError("t must be non-negative")
    min_chord = 2.0 * math.sqrt(1.0 - a * a)
    if not 0.0 < dt < min_chord:
        raise ValueError(f"dt must lie in (0, {min_chord:.6g}) for a={a}")
    M, V, count = stepped_flow(a, [float(alpha)], float(t), float(dt))
    return RayState(position=M[0].copy(), direction=V[0].copy(),
                    reflections=int(count[0]), time=float(t))


def front_derivative(src, alpha, t, tol=1e-9):
    """Derivative of the front point with respect to the launch angle.

    Raises BreakpointError when ``alpha`` is within ``tol`` of an angle where
    the reflection count of the ray changes at time ``t``.
    """
    a = as_source(src).a
    probe = np.array([alpha - tol, alpha, alpha + tol])
    k = segment_index(a, probe, float(t))
    if k[0] != k[1] or k[1] != k[2]:
        raise BreakpointError(f"alpha={alpha!r} is a reflection-count breakpoint at t={t!r}")
    gx, gy = flow_derivative(a, float(alpha), float(t), int(k[1]))
    return np.array([float(gx), float(gy)])
