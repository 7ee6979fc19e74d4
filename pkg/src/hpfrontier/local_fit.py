"""Kernel-weighted polynomial fit of power-transformed responses.

At a query point ``x`` the fit solves

    min_beta  sum_i ((p+1) Y_i^p - sum_j beta_j (X_i - x)^j)^2 K_h(X_i - x)

whose intercept estimates ``E[(p+1) Y^p | X = x]``. The system is assembled
in the scaled coordinate ``t = (X - x) / h`` and on responses divided by the
window maximum ``s``, which keeps ``Y^p`` representable for large ``p``. Both
changes leave the intercept unchanged up to the known factor ``s**p``.
"""

from dataclasses import dataclass

import numpy as np

from ._validation import check_sample
from .exceptions import EmptyWindow

__all__ = [
    "Sample",
    "DesignSystem",
    "LocalFit",
    "CONDITION_LIMIT",
    "power_transform",
    "assemble_system",
    "solve_fit",
    "local_fit_at",
    "fit_window",
]

CONDITION_LIMIT = 1e10


@dataclass(frozen=True)
class Sample:
    """Observations ``(x_i, y_i)`` with ``y_i >= 0``.

    Arrays are copied and made read-only; the original order is preserved.
    """

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x, y = check_sample(self.x, self.y)
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __len__(self):
        return self.x.shape[0]

    def sorted(self):
        """Return a copy ordered by abscissa (stable)."""
        order = np.argsort(self.x, kind="stable")
        return Sample(self.x[order], self.y[order])


@dataclass(frozen=True)
class DesignSystem:
    """Normal equations in scaled coordinates.

    ``normal_matrix[j, l] = sum_i t_i^(j+l) K(t_i) / h`` and
    ``rhs[j] = sum_i t_i^j K(t_i) z_i / h``.
    """

    normal_matrix: np.ndarray
    rhs: np.ndarray


@dataclass(frozen=True)
class LocalFit:
    """Result of a local fit at one point.

    Attributes
    ----------
    beta0_scaled : float
        Intercept computed on responses divided by ``scale``. The intercept on
        the original responses is ``scale**p * beta0_scaled``.
    scale : float
        Window maximum of the responses (1 when that maximum is zero).
    beta_scaled : ndarray, shape (k+1,)
        Coefficients for the powers of ``t = (X - x)/h``; entries above
        ``degraded_to`` are zero.
    window_count : int
        Number of observations with ``|X_i - x| <= h``.
    condition_estimate : float
        Largest over smallest pivot of the accepted factorisation.
    degraded_to : int
        Degree actually fitted.
    """

    beta0_scaled: float
    scale: float
    beta_scaled: np.ndarray
    window_count: int
    condition_estimate: float
    degraded_to: int


def power_transform(y, p, scale=1.0):
    """Return ``(p+1) * (y/scale)**p`` evaluated in the log domain.

    Zeros map to zero.
    """
    y = np.asarray(y, dtype=float)
    if p < 1:
        raise ValueError(f"power must be >= 1, got {p}")
    if not scale > 0:
        raise ValueError(f"scale must be positive, got {scale}")
    out = np.zeros_like(y)
    pos = y > 0
    out[pos] = (p + 1.0) * np.exp(p * np.log(y[pos] / scale))
    return out


def assemble_system(x_obs, x, h, k, kernel, z):
    """Build the degree-``k`` normal equations at ``x``.

    Parameters
    ----------
    x_obs : array_like
        Abscissae of the observations (any subset; points outside the window
        contribute nothing).
    x, h : float
        Query point and bandwidth.
    k : int
        Polynomial degree.
    kernel : KernelSpec
    z : array_like
        Transformed responses aligned with ``x_obs``.
    """
    if not h > 0:
        raise ValueError(f"bandwidth must be positive, got {h}")
    t = (np.asarray(x_obs, dtype=float) - x) / h
    w = kernel(t) / h
    powers = t[:, None] ** np.arange(2 * k + 1)
    moments = w @ powers
    idx = np.add.outer(np.arange(k + 1), np.arange(k + 1))
    rhs = (w * np.asarray(z, dtype=float)) @ powers[:, : k + 1]
    return DesignSystem(normal_matrix=moments[idx], rhs=rhs)


def _pivots_solve(A, b):
    """Cholesky solve returning the solution and the squared diagonal pivots."""
    L = np.linalg.cholesky(A)
    y = np.linalg.solve(L, b)
    return np.linalg.solve(L.T, y), np.diag(L) ** 2


def solve_fit(system, k, window_count=None):
    """Solve the normal equations, lowering the degree when needed.

    Degree ``d`` is accepted when at least ``d + 1`` points lie in the window
    and the pivot ratio of the Cholesky factor of the leading
    ``(d+1) x (d+1)`` block stays below ``CONDITION_LIMIT``.

    Returns
    -------
    beta_scaled : ndarray, shape (k+1,)
    condition_estimate : float
    degraded_to : int

    Raises
    ------
    EmptyWindow
        If not even the degree-0 system has a positive pivot.
    """
    A = system.normal_matrix
    b = system.rhs
    for d in range(k, -1, -1):
        if window_count is not None and window_count < d + 1:
            continue
        try:
            sol, piv = _pivots_solve(A[: d + 1, : d + 1], b[: d + 1])
        except np.linalg.LinAlgError:
            continue
        if not piv.min() > 0:
            continue
        cond = float(piv.max() / piv.min())
        if cond > CONDITION_LIMIT or not np.all(np.isfinite(sol)):
            continue
        beta = np.zeros(k + 1)
        beta[: d + 1] = sol
        return beta, cond, d
    raise EmptyWindow("no observation with positive kernel weight in the window")


def fit_window(x_win, y_win, x, h, p, k, kernel):
    """Local fit from observations already restricted to ``|X - x| <= h``."""
    x_win = np.asarray(x_win, dtype=float)
    y_win = np.asarray(y_win, dtype=float)
    n_win = x_win.shape[0]
    if n_win == 0:
        raise EmptyWindow(f"no observation within h={h} of x={x}")
    scale = float(y_win.max())
    if scale <= 0:
        scale = 1.0
    z = power_transform(y_win, p, scale)
    system = assemble_system(x_win, x, h, k, kernel, z)
    beta, cond, d = solve_fit(system, k, n_win)
    return LocalFit(
        beta0_scaled=float(beta[0]),
        scale=scale,
        beta_scaled=beta,
        window_count=n_win,
        condition_estimate=cond,
        degraded_to=d,
    )


def local_fit_at(sample, x, cfg):
    """Fit the degree ``cfg.degree`` polynomial at ``x``.

    Raises
    ------
    EmptyWindow
        If no observation lies within ``cfg.bandwidth`` of ``x``.
    """
    h = cfg.bandwidth
    mask = np.abs(sample.x - x) <= h
    return fit_window(
        sample.x[mask], sample.y[mask], x, h, cfg.power, cfg.degree, cfg.kernel
    )
