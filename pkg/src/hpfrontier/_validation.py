"""Input validation helpers shared by the functional API and the estimator."""

import numbers

import numpy as np
from sklearn.utils.validation import check_array, check_consistent_length

from .kernels import MAX_DEGREE, KernelSpec


def check_abscissa(X, name="X"):
    """Return ``X`` as a finite 1-D float array.

    Accepts a 1-D array or a single-column 2-D array, the latter being what
    scikit-learn pipelines hand over.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim == 2:
        if X.shape[1] != 1:
            raise ValueError(
                f"{name} must have exactly one feature, got shape {X.shape}"
            )
        X = X[:, 0]
    X = check_array(X, ensure_2d=False, dtype=float, input_name=name)
    if X.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got shape {X.shape}")
    return np.array(X, dtype=float)


def check_sample(x, y):
    x = check_abscissa(x, "x")
    y = check_array(y, ensure_2d=False, dtype=float, input_name="y")
    y = np.array(y, dtype=float).reshape(-1)
    check_consistent_length(x, y)
    if np.any(y < 0):
        i = int(np.flatnonzero(y < 0)[0])
        raise ValueError(f"responses must be non-negative; y[{i}] = {y[i]}")
    return x, y


def check_estimator_params(degree, bandwidth, power, kernel):
    """Validate a (degree, bandwidth, power, kernel) tuple and normalise it."""
    if not isinstance(degree, numbers.Integral) or not 0 <= degree <= MAX_DEGREE:
        raise ValueError(f"degree must be an integer in 0..{MAX_DEGREE}, got {degree!r}")
    if not (np.isfinite(bandwidth) and bandwidth > 0):
        raise ValueError(f"bandwidth must be positive and finite, got {bandwidth!r}")
    if not (np.isfinite(power) and power >= 1):
        raise ValueError(f"power must be >= 1, got {power!r}")
    if not isinstance(kernel, KernelSpec):
        kernel = KernelSpec(kernel)
    return int(degree), float(bandwidth), float(power), kernel


def check_grid(grid):
    grid = np.asarray(grid, dtype=float).reshape(-1)
    if grid.size and not np.all(np.isfinite(grid)):
        raise ValueError("grid must be finite")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")
    return grid
