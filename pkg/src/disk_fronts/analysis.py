"""Length time series: construction, detrending, amplitude growth and period."""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
import math
import os

import numpy as np

from ._validation import check_positive, check_series, check_source_distance
from .asymptotics import ModelParams, lambda_slope, length_model_series
from .exceptions import DegenerateSeriesError, InsufficientDataError
from .wavefront import front_length

THREADS_ENV = "DISK_FRONTS_THREADS"
PERIOD = 2.0


@dataclass(frozen=True, eq=False)
class LengthSeries:
    a: float
    t_values: np.ndarray
    sim: np.ndarray
    model: np.ndarray
    lambda_line: np.ndarray

    def __post_init__(self):
        t, sim, model, line = check_series(self.t_values, self.sim, self.model, self.lambda_line)
        object.__setattr__(self, "t_values", t)
        object.__setattr__(self, "sim", sim)
        object.__setattr__(self, "model", model)
        object.__setattr__(self, "lambda_line", line)

    @property
    def residual(self):
        """Simulated length minus the linear law."""
        return self.sim - self.lambda_line

    def __len__(self):
        return self.t_values.size


def default_jobs():
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def time_grid(t_min, t_max, dt):
    if dt <= 0:
        raise ValueError("dt must be positive")
    if not t_min < t_max:
        raise ValueError("t_min must be smaller than t_max")
    n = int(math.floor((t_max - t_min) / dt + 1e-9)) + 1
    return t_min + dt * np.arange(n)


def _lengths_chunk(args):
    a, ts, quad_tol = args
    return [front_length(a, t, quad_tol) for t in ts]


def simulated_lengths(a, t_values, quad_tol=1e-8, n_jobs=None):
    """``front_length`` over a time grid, optionally across worker processes."""
    t_values = np.asarray(t_values, dtype=float)
    n_jobs = default_jobs() if n_jobs is None else n_jobs
    if n_jobs <= 1 or t_values.size < 2 * n_jobs:
        return np.array(_lengths_chunk((a, t_values, quad_tol)))
    chunks = np.array_split(t_values, n_jobs)
    with ProcessPoolExecutor(max_workers=n_jobs) as pool:
        parts = pool.map(_lengths_chunk, [(a, c, quad_tol) for c in chunks])
    return np.concatenate([np.asarray(p) for p in parts])


def series_model(a, t_values, N):
    """Series model on a grid; equal to 0 at ``t = 0`` by continuity."""
    t_values = np.asarray(t_values, dtype=float)
    out = np.zeros_like(t_values)
    pos = t_values > 0
    out[pos] = length_model_series(ModelParams(a, N), t_values[pos])
    return out


def build_series(a, t_min, t_max, dt, N=10, quad_tol=1e-8, n_jobs=None):
    """Simulated length, series model and linear law on ``t_min, t_min + dt, ..., t_max``."""
    a = check_source_distance(a)
    quad_tol = check_positive("quad_tol", quad_tol)
    if t_min < 0:
        raise ValueError("t_min must be non-negative")
    t = time_grid(t_min, t_max, dt)
    return LengthSeries(a=a, t_values=t, sim=simulated_lengths(a, t, quad_tol, n_jobs),
                        model=series_model(a, t, N), lambda_line=lambda_slope(a) * t)


def windowed_maxima(t, values, window=PERIOD, step=0.5 * PERIOD):
    """Max of ``|values|`` over windows ``[s, s + window]`` stepped by ``step``.

    Returns the times at which each maximum is reached and the maxima.
    """
    t, values = check_series(t, values)
    mag = np.abs(values)
    where, peaks = [], []
    start = t[0]
    while start + window <= t[-1] + 1e-12:
        sel = np.nonzero((t >= start - 1e-12) & (t <= start + window + 1e-12))[0]
        if sel.size:
            j = sel[np.argmax(mag[sel])]
            where.append(t[j])
            peaks.append(mag[j])
        start += step
    return np.array(where), np.array(peaks)


def growth_exponent(t, values, window=PERIOD, step=0.5 * PERIOD):
    """Least-squares slope of log(windowed max |values|) against log(t)."""
    where, peaks = windowed_maxima(t, values, window, step)
    keep = (peaks > 0) & (where > 0)
    if keep.sum() < 3:
        raise InsufficientDataError("need at least three non-empty windows")
    slope, _ = np.polyfit(np.log(where[keep]), np.log(peaks[keep]), 1)
    return float(slope)


def amplitude_exponent(series, window=PERIOD, step=0.5 * PERIOD):
    """Exponent ``p`` in ``max |sim - lambda t| ~ C t^p`` over one-period windows."""
    t = series.t_values
    if t.size < 3 or not (t[-1] >= 10.0 * t[0] or t[-1] - t[0] >= 10.0 * PERIOD):
        raise InsufficientDataError("series must span a decade in t or ten periods")
    return growth_exponent(t, series.residual, window, step)


def _uniform_step(t):
    steps = np.diff(t)
    if steps.size == 0 or not np.allclose(steps, steps[0], rtol=1e-6, atol=1e-12):
        raise InsufficientDataError("series must be sampled on a uniform grid")
    return float(steps[0])


def autocorrelation(x, unbiased=False):
    """Normalized sample autocorrelation.

    The default (biased) estimator divides every lag by ``n``; it tapers like
    ``(n - k)/n``, which favours the first period but drags peaks toward
    shorter lags. ``unbiased`` divides lag ``k`` by ``n - k`` instead.
    """
    x = np.asarray(x, dtype=float) - np.mean(x)
    n = x.size
    spec = np.fft.rfft(x, 2 * n)
    acf = np.fft.irfft(spec * np.conj(spec))[:n]
    if unbiased:
        acf = acf / (n - np.arange(n))
    return acf / acf[0] if acf[0] > 0 else acf


def dominant_period(series, min_periods=3):
    """Period of the detrended length from the highest autocorrelation peak.

    The peak is selected on the biased autocorrelation, searched after its
    first zero crossing, then located by a parabola through the three
    unbiased autocorrelation samples around it.
    """
    t = series.t_values
    dt = _uniform_step(t)
    if t[-1] - t[0] < min_periods * PERIOD:
        raise InsufficientDataError(f"need at least {min_periods} periods of data")
    acf = autocorrelation(series.residual)
    n = acf.size
    below = np.nonzero(acf < 0)[0]
    if below.size == 0:
        raise InsufficientDataError("no significant autocorrelation peak")
    lo, hi = below[0], n // 2
    if hi - lo < 3:
        raise InsufficientDataError("no significant autocorrelation peak")
    k = lo + int(np.argmax(acf[lo:hi]))
    if acf[k] < 0.1 or k == lo or k >= hi - 1:
        raise InsufficientDataError("no significant autocorrelation peak")
    fair = autocorrelation(series.residual, unbiased=True)
    k = k - 1 + int(np.argmax(fair[k - 1:k + 2]))
    y0, y1, y2 = fair[k - 1], fair[k], fair[k + 1]
    denom = y0 - 2.0 * y1 + y2
    shift = 0.5 * (y0 - y2) / denom if denom < 0 else 0.0
    return float((k + shift) * dt)


def _rms(x):
    return float(np.sqrt(np.mean(np.square(x))))


def model_fit_ratio(series):
    """RMS of ``sim - model`` relative to the RMS of ``sim - lambda t``.

    Raises DegenerateSeriesError when the model carries no oscillating part
    (for instance ``a = 1/2``, where every term vanishes).
    """
    correction = series.model - series.lambda_line
    scale = max(1.0, float(np.max(np.abs(series.lambda_line))))
    if np.max(np.abs(correction)) <= 1e-9 * scale:
        raise DegenerateSeriesError("degenerate: use boundedness test")
    denom = _rms(series.residual)
    if denom == 0.0:
        raise DegenerateSeriesError("degenerate: use boundedness test")
    return _rms(series.sim - series.model) / denom


def residual_phase(series):
    """Phase of the period-2 component of the detrended length, reduced mod pi.

    The sign of the lowest oscillating term flips with ``cos(pi a)``, which is
    an amplitude sign rather than a phase shift; hence the reduction mod pi.
    """
    t = series.t_values
    r = series.residual / np.sqrt(np.maximum(t, 1e-12))
    comp = np.sum(r * np.exp(-1j * math.pi * t))
    return float(np.mod(np.angle(comp), math.pi))


def analysis_report(series):
    """Period, amplitude exponent and model fit as an ordered dict of fields."""
    report = {"a": series.a}
    for key, func in (("period", dominant_period), ("exponent", amplitude_exponent)):
        try:
            report[key] = func(series)
        except InsufficientDataError as exc:
            report[key] = f"unavailable: {exc}"
    try:
        report["fit_ratio"] = model_fit_ratio(series)
    except DegenerateSeriesError as exc:
        report["fit_ratio"] = str(exc)
    report["residual_max"] = float(np.max(np.abs(series.residual)))
    return report
