"""Synthetic samples below a known frontier.

``X`` is uniform on [0, 1] and, given ``X = x``, ``Y`` lives on ``[0, g(x)]``
with survival function ``P(Y > y | X = x) = (1 - y/g(x))**gamma``. ``gamma = 1``
is the uniform conditional law; larger ``gamma`` puts less mass near the
frontier.

Random streams come from numpy's counter-based Philox generator keyed by
``(seed, *spawn_key)``, so each replication owns an independent stream that
does not depend on how replications are scheduled.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .local_fit import Sample

__all__ = [
    "SimulationModel",
    "frontier_paper",
    "make_rng",
    "derive_seed",
    "inverse_survival",
    "uniform_open",
    "sample_y_given_x",
    "generate_sample",
]


def frontier_paper(x):
    """``g(x) = (0.1 + sin(pi x)) * (1.1 - exp(-64 (x - 0.5)^2) / 2)``."""
    x = np.asarray(x, dtype=float)
    out = (0.1 + np.sin(np.pi * x)) * (1.1 - 0.5 * np.exp(-64.0 * (x - 0.5) ** 2))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class SimulationModel:
    gamma: float = 1.0
    frontier: Callable = field(default=frontier_paper, compare=False)
    frontier_name: str = "paper"
    design_density: str = "uniform01"

    def __post_init__(self):
        if not (np.isfinite(self.gamma) and self.gamma > 0):
            raise ValueError(f"gamma must be positive, got {self.gamma!r}")
        if self.design_density != "uniform01":
            raise ValueError(f"unsupported design density {self.design_density!r}")
        g_min = float(np.min(self.frontier(np.linspace(0.0, 1.0, 1001))))
        if not g_min > 0:
            raise ValueError(f"frontier must stay positive on [0, 1], min is {g_min}")

    def to_dict(self):
        return {
            "gamma": self.gamma,
            "frontier": self.frontier_name,
            "design_density": self.design_density,
        }


def make_rng(seed, *spawn_key):
    """Philox generator keyed by ``seed`` and an optional replication key."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in spawn_key))
    return np.random.Generator(np.random.Philox(ss))


def derive_seed(seed, *keys):
    """A 63-bit seed derived from ``seed`` and ``keys`` for nested campaigns."""
    state = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in keys))
    return int(state.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


def uniform_open(rng, size=None):
    """Uniform draws on the open interval (0, 1)."""
    k = rng.integers(0, 2**53, size=size, dtype=np.int64)
    return (k + 0.5) * 2.0**-53


def inverse_survival(v, gx, gamma):
    """Return ``y`` with ``(1 - y/gx)**gamma = v``."""
    return gx * (1.0 - np.power(v, 1.0 / gamma))


def sample_y_given_x(x, model, rng):
    """Draw ``Y | X = x`` by inverting the survival function."""
    x = np.asarray(x, dtype=float)
    gx = model.frontier(x)
    v = uniform_open(rng, size=x.shape)
    y = inverse_survival(v, gx, model.gamma)
    y = np.clip(y, 0.0, gx)
    return float(y) if y.ndim == 0 else y


def generate_sample(model, n, rng):
    """``n`` i.i.d. pairs from ``model``; abscissae drawn first, then responses."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    x = rng.random(n)
    y = sample_y_given_x(x, model, rng)
    return Sample(x, y)
