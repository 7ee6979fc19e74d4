"""scikit-learn compatible wrapper around the frontier estimator."""

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_abscissa, check_grid
from .frontier import (
    EstimatorConfig,
    ScheduleParams,
    estimate_grid,
    select_practical,
    select_schedule,
)
from .local_fit import Sample

__all__ = ["LocalPolynomialFrontier"]


class LocalPolynomialFrontier(RegressorMixin, BaseEstimator):
    """Estimate the upper boundary of the support of ``(X, y)``.

    ``fit`` stores the sample and resolves the bandwidth and power; ``predict``
    returns ``g_hat(x) = beta0 ** (1/p)`` where ``beta0`` is the intercept of a
    degree-``degree`` local polynomial fit of ``(p+1) y**p``.

    Parameters
    ----------
    degree : int, default=1
        Local polynomial degree (0..5).
    bandwidth, power : float, optional
        Override the values produced by ``rule``.
    kernel : str, default="cosine_squared"
        ``"cosine_squared"``, ``"biweight"`` or ``"epanechnikov"``.
    rule : {"practical", "schedule"}, default="practical"
        ``"practical"`` uses ``h = 4 sd(X) / sqrt(n)`` and ``p = sqrt(n)``;
        ``"schedule"`` uses the log-corrected schedule with ``tau``, ``c_h``
        and ``c_p``.
    tau, c_h, c_p : float
        Schedule constants, see :class:`~hpfrontier.frontier.ScheduleParams`.

    Attributes
    ----------
    bandwidth_, power_ : float
        Values actually used.
    config_ : EstimatorConfig
    n_features_in_ : int
        Always 1.

    Examples
    --------
    >>> import numpy as np
    >>> rng = np.random.default_rng(0)
    >>> X = rng.random(400)
    >>> y = rng.random(400) * (1 + X)
    >>> est = LocalPolynomialFrontier().fit(X, y)
    >>> bool(abs(est.predict([0.5])[0] - 1.5) < 0.1)
    True
    """

    def __init__(
        self,
        degree=1,
        bandwidth=None,
        power=None,
        kernel="cosine_squared",
        rule="practical",
        tau=1.0,
        c_h=0.062,
        c_p=38.6,
    ):
        self.degree = degree
        self.bandwidth = bandwidth
        self.power = power
        self.kernel = kernel
        self.rule = rule
        self.tau = tau
        self.c_h = c_h
        self.c_p = c_p

    def fit(self, X, y):
        sample = Sample(X, y)
        if self.rule == "practical":
            h, p = (
                (None, None)
                if self.bandwidth is not None and self.power is not None
                else select_practical(sample)
            )
        elif self.rule == "schedule":
            params = ScheduleParams(self.tau, self.c_h, self.c_p)
            h, p, _ = select_schedule(len(sample), self.degree, params)
        else:
            raise ValueError(f"rule must be 'practical' or 'schedule', got {self.rule!r}")
        self.config_ = EstimatorConfig(
            degree=self.degree,
            bandwidth=h if self.bandwidth is None else self.bandwidth,
            power=p if self.power is None else self.power,
            kernel=self.kernel,
        )
        self.bandwidth_ = self.config_.bandwidth
        self.power_ = self.config_.power
        self.sample_ = sample
        self.n_features_in_ = 1
        return self

    def predict_curve(self, X):
        """Estimates with per-point flags as a :class:`FrontierCurve`.

        ``X`` must be strictly increasing.
        """
        check_is_fitted(self, "config_")
        grid = check_grid(check_abscissa(X))
        return estimate_grid(self.sample_, grid, self.config_)

    def predict(self, X):
        """Frontier estimates at ``X``; NaN where the window is empty."""
        check_is_fitted(self, "config_")
        X = check_abscissa(X)
        # evaluate on the sorted unique points, then scatter back
        uniq, inverse = np.unique(X, return_inverse=True)
        curve = estimate_grid(self.sample_, uniq, self.config_)
        return curve.values[inverse]
