"""Frontier estimates ``g_hat(x) = beta0 ** (1/p)`` and parameter rules."""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ._validation import check_estimator_params, check_grid
from .exceptions import EmptyWindow, ZeroSpread
from .kernels import KernelSpec
from .local_fit import fit_window

__all__ = [
    "Flag",
    "EstimatorConfig",
    "FrontierCurve",
    "ScheduleParams",
    "estimate_at",
    "estimate_grid",
    "select_practical",
    "select_schedule",
    "schedule_ratio",
]


class Flag(str, Enum):
    OK = "ok"
    DEGRADED = "degraded"
    NONPOSITIVE_FALLBACK = "nonpositive_fallback"
    EMPTY_WINDOW = "empty_window"


@dataclass(frozen=True)
class EstimatorConfig:
    """Tuning of the estimator: degree ``k``, bandwidth ``h``, power ``p``."""

    degree: int = 1
    bandwidth: float = 0.05
    power: float = 20.0
    kernel: KernelSpec = field(default_factory=KernelSpec)

    def __post_init__(self):
        k, h, p, kernel = check_estimator_params(
            self.degree, self.bandwidth, self.power, self.kernel
        )
        object.__setattr__(self, "degree", k)
        object.__setattr__(self, "bandwidth", h)
        object.__setattr__(self, "power", p)
        object.__setattr__(self, "kernel", kernel)

    def to_dict(self):
        return {
            "degree": self.degree,
            "bandwidth": self.bandwidth,
            "power": self.power,
            "kernel": self.kernel.name,
        }


@dataclass(frozen=True)
class FrontierCurve:
    """Estimates on a strictly increasing grid, one flag per point.

    ``values`` is NaN exactly where the flag is ``empty_window``.
    """

    grid: np.ndarray
    values: np.ndarray
    flags: np.ndarray

    def flag_counts(self):
        return {f.value: int(np.sum(self.flags == f.value)) for f in Flag}


@dataclass(frozen=True)
class ScheduleParams:
    """Constants of the asymptotic schedule

    ``h = c_h n^{-1/2} (log n)^{1 + 3 tau/5}``,
    ``p = c_p n^{1/2} (log n)^{-1 - tau}``.

    The default constants make the schedule coincide with the practical rule
    at ``n = 500`` for a uniform design on [0, 1].
    """

    tau: float = 1.0
    c_h: float = 0.062
    c_p: float = 38.6

    def __post_init__(self):
        for name in ("tau", "c_h", "c_p"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive, got {v!r}")

    def to_dict(self):
        return {"tau": self.tau, "c_h": self.c_h, "c_p": self.c_p}


def _estimate_window(x_win, y_win, x, cfg):
    try:
        fit = fit_window(
            x_win, y_win, x, cfg.bandwidth, cfg.power, cfg.degree, cfg.kernel
        )
    except EmptyWindow:
        return math.nan, Flag.EMPTY_WINDOW
    if fit.beta0_scaled > 0:
        flag = Flag.OK if fit.degraded_to == cfg.degree else Flag.DEGRADED
        return fit.scale * fit.beta0_scaled ** (1.0 / cfg.power), flag
    if cfg.degree == 0:
        # degree 0 is a weighted mean of non-negative values: zero only when
        # every weighted response is zero
        return 0.0, Flag.OK
    fit0 = fit_window(x_win, y_win, x, cfg.bandwidth, cfg.power, 0, cfg.kernel)
    value = fit0.scale * max(fit0.beta0_scaled, 0.0) ** (1.0 / cfg.power)
    return value, Flag.NONPOSITIVE_FALLBACK


def estimate_at(sample, x, cfg):
    """Estimate the frontier at ``x``.

    Returns
    -------
    value : float
        ``scale * beta0_scaled ** (1/p)``; NaN when the window is empty.
    flag : Flag
        ``nonpositive_fallback`` means the degree-k intercept was not positive
        and the degree-0 estimate was returned instead.
    """
    mask = np.abs(sample.x - x) <= cfg.bandwidth
    return _estimate_window(sample.x[mask], sample.y[mask], x, cfg)


def estimate_grid(sample, grid, cfg):
    """Evaluate :func:`estimate_at` on every point of ``grid``."""
    grid = check_grid(grid)
    order = np.argsort(sample.x, kind="stable")
    xs = sample.x[order]
    ys = sample.y[order]
    h = cfg.bandwidth
    lo = np.searchsorted(xs, grid - 1.5 * h, side="left")
    hi = np.searchsorted(xs, grid + 1.5 * h, side="right")
    values = np.empty(grid.shape[0])
    flags = np.empty(grid.shape[0], dtype=object)
    for i, x in enumerate(grid):
        xw = xs[lo[i] : hi[i]]
        yw = ys[lo[i] : hi[i]]
        mask = np.abs(xw - x) <= h
        v, f = _estimate_window(xw[mask], yw[mask], x, cfg)
        values[i] = v
        flags[i] = f.value
    return FrontierCurve(grid=grid, values=values, flags=flags.astype(str))


def select_practical(sample):
    """Return ``(h, p) = (4 sd(X) n^{-1/2}, n^{1/2})``.

    ``sd`` uses the ``n - 1`` denominator.

    Raises
    ------
    ZeroSpread
        If all abscissae coincide.
    """
    n = len(sample)
    if n < 2:
        raise ValueError(f"need at least 2 observations, got {n}")
    sd = float(np.std(sample.x, ddof=1))
    # identical abscissae can leave a rounding-level sd
    if np.ptp(sample.x) == 0 or not sd > 0:
        raise ZeroSpread("all abscissae are equal; the bandwidth rule needs spread")
    return 4.0 * sd / math.sqrt(n), math.sqrt(n)


def schedule_ratio(n, h, p, k):
    """``(p/(n h)) log^2(n h) / (h p)^(2k+2)``, constant along a compliant schedule."""
    nh = n * h
    return (p / nh) * math.log(nh) ** 2 / (h * p) ** (2 * k + 2)


def select_schedule(n, k=1, params=None):
    """Bandwidth and power from the asymptotic schedule.

    Returns
    -------
    h, p, ratio : float
        ``ratio`` is :func:`schedule_ratio`, reported to monitor how closely
        the balance between bias and variance orders is kept.
    """
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    params = params or ScheduleParams()
    log_n = math.log(n)
    h = params.c_h * n**-0.5 * log_n ** (1.0 + 0.6 * params.tau)
    p = params.c_p * n**0.5 * log_n ** (-1.0 - params.tau)
    return h, p, schedule_ratio(n, h, p, k)
