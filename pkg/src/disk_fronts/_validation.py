"""Input validation helpers shared by the functional API and the estimators."""

import numbers

import numpy as np
from sklearn.utils.validation import column_or_1d


def check_source_distance(a):
    if isinstance(a, bool) or not isinstance(a, numbers.Real):
        raise TypeError(f"a must be a real number, got {type(a).__name__}")
    a = float(a)
    if not 0.0 <= a < 1.0:
        raise ValueError("a must be in [0,1)")
    return a


def check_positive(name, value, allow_zero=False):
    value = float(value)
    if not np.isfinite(value) or value < 0 or (value == 0 and not allow_zero):
        raise ValueError(f"{name} must be {'non-negative' if allow_zero else 'positive'}")
    return value


def check_times(t, allow_zero=True):
    """Coerce ``t`` to a finite 1-d float array of admissible times."""
    t = column_or_1d(np.atleast_1d(np.asarray(t, dtype=float)), warn=True)
    if not np.all(np.isfinite(t)):
        raise ValueError("times must be finite")
    if np.any(t < 0) or (not allow_zero and np.any(t == 0)):
        raise ValueError("t must be positive" if not allow_zero else "t must be non-negative")
    return t


def check_series(t, *columns):
    """Validate a time grid and matching value columns."""
    t = column_or_1d(np.asarray(t, dtype=float))
    if t.size > 1 and np.any(np.diff(t) <= 0):
        raise ValueError("t_values must be strictly increasing")
    out = [t]
    for col in columns:
        col = column_or_1d(np.asarray(col, dtype=float))
        if col.shape != t.shape:
            raise ValueError("series columns must have the same length as t_values")
        out.append(col)
    return out
