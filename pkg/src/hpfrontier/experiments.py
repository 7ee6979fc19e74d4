"""Monte-Carlo campaigns for the frontier estimator.

Three kinds of study are provided:

* :func:`run_replications` repeats ``simulate -> select (h, p) -> estimate on
  a grid -> L1 error`` and keeps the best and worst replications;
* :func:`rate_study` follows the estimate at a fixed ``x0`` along a ladder of
  sample sizes with the asymptotic schedule and compares the RMSE with
  ``h (h p)^k``;
* :func:`consistency_check` tracks the median L1 error over a size ladder.

Every replication draws from its own Philox stream keyed by
``(base_seed, ...)``; results are reduced in replication order, so the number
of worker threads never changes a report.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .exceptions import AllEmpty
from .frontier import (
    EstimatorConfig,
    Flag,
    FrontierCurve,
    ScheduleParams,
    estimate_at,
    estimate_grid,
    select_practical,
    select_schedule,
)
from .kernels import KernelSpec, build_moment_table, kernel_moment
from .simgen import SimulationModel, derive_seed, generate_sample, make_rng

__all__ = [
    "RULES",
    "ExperimentConfig",
    "ExperimentReport",
    "RateStudyReport",
    "l1_error",
    "resolve_parameters",
    "run_replications",
    "rate_study",
    "consistency_check",
    "sn_concentration_check",
    "interior_mask",
]

SCHEMA_VERSION = 1
RULES = ("practical", "schedule", "fixed")


def l1_error(curve, truth, grid=None):
    """Trapezoid approximation of ``int |g_hat - g|`` over the grid span.

    Grid points flagged ``empty_window`` are dropped before integrating.

    Parameters
    ----------
    curve : FrontierCurve
    truth : callable
        Vectorised true frontier.
    grid : array_like, optional
        Must equal ``curve.grid`` when given.

    Raises
    ------
    AllEmpty
        If no grid point carries an estimate.
    """
    if grid is not None and not np.array_equal(np.asarray(grid, dtype=float), curve.grid):
        raise ValueError("grid does not match the curve's grid")
    keep = curve.flags != Flag.EMPTY_WINDOW.value
    if not keep.any():
        raise AllEmpty("every grid point has an empty window")
    g = curve.grid[keep]
    err = np.abs(curve.values[keep] - truth(g))
    if g.size == 1:
        return 0.0 if err[0] == 0 else float("inf")
    return float(np.trapezoid(err, g))


def interior_mask(grid, h, lo=0.0, hi=1.0):
    """Grid points at least one bandwidth away from the design support edges."""
    grid = np.asarray(grid, dtype=float)
    return (grid >= lo + h) & (grid <= hi - h)


@dataclass(frozen=True)
class ExperimentConfig:
    """One Monte-Carlo campaign.

    ``rule`` picks ``(h, p)`` per replication: ``"practical"`` from the data,
    ``"schedule"`` from ``n`` and ``schedule``, ``"fixed"`` from ``h``/``p``.
    """

    model: SimulationModel = field(default_factory=SimulationModel)
    n: int = 500
    m: int = 100
    grid_size: int = 201
    degree: int = 1
    kernel: KernelSpec = field(default_factory=KernelSpec)
    rule: str = "practical"
    h: float | None = None
    p: float | None = None
    schedule: ScheduleParams = field(default_factory=ScheduleParams)
    base_seed: int = 0

    def __post_init__(self):
        for name in ("n", "m", "grid_size"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.rule not in RULES:
            raise ValueError(f"rule must be one of {RULES}, got {self.rule!r}")
        if self.rule == "fixed" and (self.h is None or self.p is None):
            raise ValueError("rule 'fixed' needs both h and p")
        if not isinstance(self.kernel, KernelSpec):
            object.__setattr__(self, "kernel", KernelSpec(self.kernel))

    @property
    def grid(self):
        return np.linspace(0.0, 1.0, self.grid_size)

    def to_dict(self):
        return {
            "model": self.model.to_dict(),
            "n": self.n,
            "m": self.m,
            "grid_size": self.grid_size,
            "degree": self.degree,
            "kernel": self.kernel.name,
            "rule": self.rule,
            "h": self.h,
            "p": self.p,
            "schedule": self.schedule.to_dict(),
            "base_seed": self.base_seed,
        }


def resolve_parameters(sample, rule, degree, kernel, h=None, p=None, schedule=None):
    """Turn a selection rule into an :class:`EstimatorConfig`.

    Explicit ``h`` or ``p`` override whatever the rule produces.
    """
    if rule == "practical":
        h0, p0 = select_practical(sample)
    elif rule == "schedule":
        h0, p0, _ = select_schedule(len(sample), degree, schedule)
    elif rule == "fixed":
        h0, p0 = h, p
    else:
        raise ValueError(f"unknown rule {rule!r}")
    return EstimatorConfig(
        degree=degree,
        bandwidth=h0 if h is None else h,
        power=p0 if p is None else p,
        kernel=kernel,
    )


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    l1_errors: np.ndarray
    best_index: int | None
    worst_index: int | None
    best_curve: FrontierCurve | None
    worst_curve: FrontierCurve | None
    fallback_counts: list
    bandwidths: np.ndarray
    powers: np.ndarray
    max_ratio: np.ndarray
    interior_ok_fraction: np.ndarray

    def to_dict(self):
        """JSON-ready document; excluded replications appear as ``null``."""

        def floats(a):
            return [None if not np.isfinite(v) else float(v) for v in a]

        return {
            "schema_version": SCHEMA_VERSION,
            "config": self.config.to_dict(),
            "l1_errors": floats(self.l1_errors),
            "best_index": self.best_index,
            "worst_index": self.worst_index,
            "fallback_counts": self.fallback_counts,
            "bandwidths": floats(self.bandwidths),
            "powers": floats(self.powers),
            "max_response_ratio": floats(self.max_ratio),
            "interior_ok_fraction": floats(self.interior_ok_fraction),
        }


def _replicate(cfg, r):
    model = cfg.model
    sample = generate_sample(model, cfg.n, make_rng(cfg.base_seed, r))
    est = resolve_parameters(
        sample, cfg.rule, cfg.degree, cfg.kernel, cfg.h, cfg.p, cfg.schedule
    )
    grid = cfg.grid
    curve = estimate_grid(sample, grid, est)
    try:
        err = l1_error(curve, model.frontier)
    except AllEmpty:
        err = math.nan
    interior = interior_mask(grid, est.bandwidth)
    ok_frac = (
        float(np.mean(curve.flags[interior] == Flag.OK.value))
        if interior.any()
        else math.nan
    )
    ratio = float(np.max(sample.y / model.frontier(sample.x)))
    return err, curve, curve.flag_counts(), est, ratio, ok_frac


def _map(func, items, workers):
    if workers <= 1:
        return [func(i) for i in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def _argbest(errors):
    """Lowest-index argmin and argmax over finite entries, ``None`` if there are none."""
    finite = np.isfinite(errors)
    if not finite.any():
        return None, None
    lo = np.where(finite, errors, np.inf)
    hi = np.where(finite, errors, -np.inf)
    return int(np.argmin(lo)), int(np.argmax(hi))


def run_replications(cfg, workers=1):
    """Run ``cfg.m`` replications and collect the L1 errors.

    A replication whose curve is entirely empty is kept with a NaN error and
    ignored by the best/worst selection. If every replication is excluded the
    best/worst indices and curves are ``None``.
    """
    results = _map(lambda r: _replicate(cfg, r), range(cfg.m), workers)
    errors = np.array([res[0] for res in results])
    best, worst = _argbest(errors)
    return ExperimentReport(
        config=cfg,
        l1_errors=errors,
        best_index=best,
        worst_index=worst,
        best_curve=None if best is None else results[best][1],
        worst_curve=None if worst is None else results[worst][1],
        fallback_counts=[res[2] for res in results],
        bandwidths=np.array([res[3].bandwidth for res in results]),
        powers=np.array([res[3].power for res in results]),
        max_ratio=np.array([res[4] for res in results]),
        interior_ok_fraction=np.array([res[5] for res in results]),
    )


@dataclass
class RateStudyReport:
    """Pointwise error of the estimate at ``x0`` along a ladder of sizes.

    ``theoretical_rate`` is the bias order ``h (h p)^k``;
    ``predicted_variance`` is ``g(x0)^2 C / (f n h (2p+1))``, the first-order
    variance of ``g_hat`` implied by the kernel constant ``C``.
    """

    sizes: np.ndarray
    x0: float
    truth: float
    bandwidths: np.ndarray
    powers: np.ndarray
    empirical_rmse: np.ndarray
    empirical_bias: np.ndarray
    empirical_variance: np.ndarray
    median_error: np.ndarray
    theoretical_rate: np.ndarray
    variance_rate: np.ndarray
    predicted_variance: np.ndarray
    fitted_slope: float
    schedule_ratio: np.ndarray
    fallbacks: np.ndarray
    config: dict = field(default_factory=dict)

    @property
    def scaled_variance(self):
        """Empirical variance times ``n h p``; bounded if the variance order holds."""
        return self.empirical_variance / self.variance_rate

    def to_dict(self):
        out = {"schema_version": SCHEMA_VERSION, "config": self.config}
        for name in (
            "sizes",
            "bandwidths",
            "powers",
            "empirical_rmse",
            "empirical_bias",
            "empirical_variance",
            "median_error",
            "theoretical_rate",
            "variance_rate",
            "predicted_variance",
            "schedule_ratio",
            "fallbacks",
        ):
            out[name] = np.asarray(getattr(self, name)).tolist()
        out["scaled_variance"] = self.scaled_variance.tolist()
        out.update(x0=self.x0, truth=self.truth, fitted_slope=self.fitted_slope)
        return out


def rate_study(
    model,
    sizes,
    k=1,
    params=None,
    reps=200,
    base_seed=0,
    x0=0.2,
    kernel=None,
    workers=1,
):
    """Empirical bias, variance and RMSE of ``g_hat(x0)`` under the schedule.

    The returned ``fitted_slope`` is the least-squares slope of
    ``log RMSE`` against ``log(h (h p)^k)``.

    The default ``x0 = 0.2`` sits on a steep flank of the test frontier. At a
    stationary point of ``g`` the ``h (h p)^k`` bias term vanishes and the
    bias shrinks like ``h^2``, so the slope there says little about the rate.
    """
    sizes = np.asarray(sizes, dtype=int)
    if sizes.size < 3 or np.any(np.diff(sizes) <= 0) or sizes[0] < 3:
        raise ValueError("sizes must be strictly increasing with at least 3 entries, all >= 3")
    params = params or ScheduleParams()
    kernel = kernel or KernelSpec()
    C = build_moment_table(kernel, k).C
    g0 = float(model.frontier(x0))
    cols = {name: [] for name in (
        "h", "p", "rmse", "bias", "var", "med", "rate", "vrate", "pvar", "ratio", "fb",
    )}
    for si, n in enumerate(sizes):
        h, p, ratio = select_schedule(int(n), k, params)
        cfg = EstimatorConfig(degree=k, bandwidth=h, power=p, kernel=kernel)

        def one(r, n=n, si=si, cfg=cfg):
            s = generate_sample(model, int(n), make_rng(base_seed, si, r))
            return estimate_at(s, x0, cfg)

        res = _map(one, range(reps), workers)
        est = np.array([v for v, _ in res])
        err = est - g0
        cols["h"].append(h)
        cols["p"].append(p)
        cols["rmse"].append(float(np.sqrt(np.mean(err**2))))
        cols["bias"].append(float(np.mean(err)))
        cols["var"].append(float(np.var(est, ddof=1)))
        cols["med"].append(float(np.median(err)))
        cols["rate"].append(h * (h * p) ** k)
        cols["vrate"].append(1.0 / (n * h * p))
        cols["pvar"].append(g0**2 * C / (n * h * (2 * p + 1)))
        cols["ratio"].append(ratio)
        cols["fb"].append(sum(f != Flag.OK for _, f in res))
    slope = float(np.polyfit(np.log(cols["rate"]), np.log(cols["rmse"]), 1)[0])
    return RateStudyReport(
        sizes=sizes,
        x0=x0,
        truth=g0,
        bandwidths=np.array(cols["h"]),
        powers=np.array(cols["p"]),
        empirical_rmse=np.array(cols["rmse"]),
        empirical_bias=np.array(cols["bias"]),
        empirical_variance=np.array(cols["var"]),
        median_error=np.array(cols["med"]),
        theoretical_rate=np.array(cols["rate"]),
        variance_rate=np.array(cols["vrate"]),
        predicted_variance=np.array(cols["pvar"]),
        fitted_slope=slope,
        schedule_ratio=np.array(cols["ratio"]),
        fallbacks=np.array(cols["fb"]),
        config={
            "model": model.to_dict(),
            "degree": k,
            "kernel": kernel.name,
            "schedule": params.to_dict(),
            "reps": reps,
            "base_seed": base_seed,
            "x0": x0,
        },
    )


def consistency_check(
    model, sizes, rule="practical", reps=50, base_seed=0, degree=1, grid_size=201,
    kernel=None, workers=1,
):
    """Median L1 error per sample size.

    Returns
    -------
    list of dict
        One row per size with keys ``n``, ``median_l1`` and ``decreasing``
        (whether the median dropped strictly relative to the previous row;
        ``None`` on the first row).
    """
    kernel = kernel or KernelSpec()
    rows = []
    for si, n in enumerate(sizes):
        cfg = ExperimentConfig(
            model=model,
            n=int(n),
            m=reps,
            grid_size=grid_size,
            degree=degree,
            kernel=kernel,
            rule=rule,
            base_seed=derive_seed(base_seed, si),
        )
        report = run_replications(cfg, workers)
        med = float(np.nanmedian(report.l1_errors))
        prev = rows[-1]["median_l1"] if rows else None
        rows.append({
            "n": int(n),
            "median_l1": med,
            "decreasing": None if prev is None else med < prev,
        })
    return rows


def sn_concentration_check(n, h, j, spec=None, seed=0, x=0.5):
    """Normalised local moment ``S_{n,j} = sum (X_i - x)^j K_h(X_i - x)``.

    For a uniform design on [0, 1] (``f(x) = 1``) returns
    ``S_{n,j} / (n h^j mu_j)`` when ``j`` is even, which tends to 1, and
    ``|S_{n,j}| / (n h^j)`` when ``j`` is odd, which tends to 0.
    """
    spec = spec or KernelSpec()
    X = make_rng(seed).random(n)
    d = X - x
    s = float(np.sum(d**j * spec(d / h) / h))
    if j % 2:
        return abs(s) / (n * h**j)
    return s / (n * h**j * kernel_moment(spec, j))
