"""Frontier estimation by local polynomial regression on high-power-transformed data."""

from .estimator import LocalPolynomialFrontier
from .exceptions import (
    AllEmpty,
    EmptyWindow,
    FrontierError,
    NegativeResponse,
    SampleFormatError,
    ZeroSpread,
)
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
from .kernels import KernelSpec, build_moment_table, equivalent_kernel
from .local_fit import LocalFit, Sample, local_fit_at
from .simgen import SimulationModel, frontier_paper, generate_sample, make_rng

__version__ = "0.1.0"

__all__ = [
    "LocalPolynomialFrontier",
    "AllEmpty",
    "EmptyWindow",
    "FrontierError",
    "NegativeResponse",
    "SampleFormatError",
    "ZeroSpread",
    "EstimatorConfig",
    "Flag",
    "FrontierCurve",
    "ScheduleParams",
    "estimate_at",
    "estimate_grid",
    "select_practical",
    "select_schedule",
    "KernelSpec",
    "build_moment_table",
    "equivalent_kernel",
    "LocalFit",
    "Sample",
    "local_fit_at",
    "SimulationModel",
    "frontier_paper",
    "generate_sample",
    "make_rng",
]
