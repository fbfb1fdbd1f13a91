"""Input validation helpers used by the estimator-style classes."""

from __future__ import annotations

import numpy as np


def as_float_array(x, name: str, ndim: int | None = None) -> np.ndarray:
    """Coerce to a float64 ndarray, rejecting NaN/inf values."""
    arr = np.asarray(x, dtype=float)
    if ndim is not None and arr.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    if arr.size and not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def check_matrix(X, name: str = "X", n_cols: int | None = None) -> np.ndarray:
    X = as_float_array(X, name)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if X.ndim != 2:
        raise ValueError(f"{name} must be a 2-D array, got shape {X.shape}")
    if n_cols is not None and X.shape[1] != n_cols:
        raise ValueError(f"{name} must have {n_cols} columns, got {X.shape[1]}")
    return X


def check_paired(X, y, x_name: str = "X", y_name: str = "y"):
    X = check_matrix(X, x_name)
    y = as_float_array(y, y_name, ndim=1)
    if X.shape[0] != y.shape[0]:
        raise ValueError(
            f"{x_name} and {y_name} disagree on sample count: "
            f"{X.shape[0]} vs {y.shape[0]}"
        )
    return X, y


def check_positive(value: float, name: str) -> float:
    value = float(value)
    if not np.isfinite(value) or value <= 0:
        raise ValueError(f"{name} must be a positive finite number, got {value}")
    return value


def check_fitted(estimator, attribute: str):
    if not hasattr(estimator, attribute):
        raise RuntimeError(
            f"{type(estimator).__name__} is not fitted yet; call fit() first"
        )
