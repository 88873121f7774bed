"""scikit-learn style wrappers over the functional API.

The estimators hold only hyper-parameters; ``predict`` maps a 1-D array of
times to front lengths, so they compose with the usual sklearn tooling
(``get_params``, ``clone``, parameter grids).
"""

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_series, check_source_distance, check_times
from .analysis import (
    LengthSeries, amplitude_exponent, dominant_period, model_fit_ratio, series_model,
    simulated_lengths,
)
from .asymptotics import lambda_slope, length_model_integral_alpha, length_model_integral_xi


class _LengthEstimator(RegressorMixin, BaseEstimator):
    """Shared ``fit``: models are parameter-free once ``a`` is given."""

    def fit(self, t=None, y=None):
        self.a_ = check_source_distance(self.a)
        self.slope_ = lambda_slope(self.a_)
        return self

    def _times(self, t):
        check_is_fitted(self, "a_")
        return check_times(t)


class WaveFrontLength(_LengthEstimator):
    """Simulated front length ``|S_t|``."""

    def __init__(self, a=0.5, quad_tol=1e-8, n_jobs=None):
        self.a = a
        self.quad_tol = quad_tol
        self.n_jobs = n_jobs

    def predict(self, t):
        t = self._times(t)
        return simulated_lengths(self.a_, t, self.quad_tol, self.n_jobs)


class SeriesModel(_LengthEstimator):
    """Linear law plus ``n_terms + 1`` oscillating corrections."""

    def __init__(self, a=0.5, n_terms=10):
        self.a = a
        self.n_terms = n_terms

    def predict(self, t):
        t = self._times(t)
        return series_model(self.a_, t, self.n_terms)


class IntegralModel(_LengthEstimator):
    """Integral model, evaluated in chord-angle (``"xi"``) or launch-angle (``"alpha"``) form."""

    def __init__(self, a=0.5, form="xi", quad_tol=1e-8):
        self.a = a
        self.form = form
        self.quad_tol = quad_tol

    def predict(self, t):
        forms = {"xi": length_model_integral_xi, "alpha": length_model_integral_alpha}
        if self.form not in forms:
            raise ValueError("form must be 'xi' or 'alpha'")
        t = self._times(t)
        func = forms[self.form]
        return np.array([func(self.a_, x, self.quad_tol) if x > 0 else 0.0 for x in t])


class OscillationAnalyzer(BaseEstimator):
    """Period, amplitude exponent and model fit of a length time series.

    ``fit(t, length)`` needs ``a`` to build the linear law and the series model;
    ``transform`` returns the detrended length ``length - 2 arcsin(a) t``.
    """

    def __init__(self, a=0.5, n_terms=10):
        self.a = a
        self.n_terms = n_terms

    def fit(self, t, length):
        t, length = check_series(t, length)
        a = check_source_distance(self.a)
        self.series_ = LengthSeries(a=a, t_values=t, sim=length,
                                    model=series_model(a, t, self.n_terms),
                                    lambda_line=lambda_slope(a) * t)
        self.period_ = dominant_period(self.series_)
        self.exponent_ = amplitude_exponent(self.series_)
        return self

    def transform(self, t, length):
        check_is_fitted(self, "series_")
        t, length = check_series(t, length)
        return length - lambda_slope(self.series_.a) * t

    def fit_ratio(self):
        check_is_fitted(self, "series_")
        return model_fit_ratio(self.series_)
