"""Input checks shared by the estimator and the CLI."""
from __future__ import annotations

import math
import numbers

import numpy as np
from sklearn.utils.validation import check_array


def check_scaled_times(X) -> np.ndarray:
    """Accept ``(n,)`` or ``(n, 1)`` scaled times; return a finite, non-negative 1-D array."""
    arr = check_array(X, ensure_2d=False, dtype=np.float64, ensure_all_finite=True)
    if arr.ndim == 2:
        if arr.shape[1] != 1:
            raise ValueError(f"expected a single column of scaled times, got shape {arr.shape}")
        arr = arr[:, 0]
    if np.any(arr < 0):
        raise ValueError("scaled times must be non-negative")
    return arr


def check_real(name: str, value, *, low=None, high=None, positive=False) -> float:
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise TypeError(f"{name} must be a real number, got {type(value).__name__}")
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite")
    if positive and value <= 0:
        raise ValueError(f"{name} must be positive, got {value}")
    if low is not None and value < low:
        raise ValueError(f"{name} must be >= {low}, got {value}")
    if high is not None and value > high:
        raise ValueError(f"{name} must be <= {high}, got {value}")
    return value


def check_int(name: str, value, *, low=None) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    if low is not None and value < low:
        raise ValueError(f"{name} must be >= {low}, got {value}")
    return int(value)
