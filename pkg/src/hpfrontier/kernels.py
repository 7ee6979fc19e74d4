"""Compactly supported kernels and their moment tables.

The local polynomial intercept behaves asymptotically like a kernel smoother
with the *equivalent kernel*

    K0*(t) = e1' S^{-1} (1, t, ..., t^k) K(t),

where ``S = [mu_{j+l}]`` is the Gram matrix of kernel moments. The same
matrices give the variance constant ``C = e1' S^{-1} S* S^{-1} e1`` with
``S* = [nu_{j+l}]`` built from moments of ``K**2``.
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

from .exceptions import QuadratureError

__all__ = [
    "KernelKind",
    "KernelSpec",
    "MomentTable",
    "MAX_DEGREE",
    "eval_kernel",
    "integrate",
    "kernel_moment",
    "build_moment_table",
    "equivalent_kernel",
]

MAX_DEGREE = 5

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(64)


class KernelKind(str, Enum):
    COSINE_SQUARED = "cosine_squared"
    BIWEIGHT = "biweight"
    EPANECHNIKOV = "epanechnikov"


def _cosine_squared(t):
    return np.cos(0.5 * np.pi * t) ** 2


def _biweight(t):
    return 0.9375 * (1.0 - t * t) ** 2


def _epanechnikov(t):
    return 0.75 * (1.0 - t * t)


_PROFILES = {
    KernelKind.COSINE_SQUARED: _cosine_squared,
    KernelKind.BIWEIGHT: _biweight,
    KernelKind.EPANECHNIKOV: _epanechnikov,
}


@dataclass(frozen=True)
class KernelSpec:
    """A symmetric probability density supported on [-1, 1].

    Parameters
    ----------
    kind : KernelKind or str
        One of ``"cosine_squared"`` (default), ``"biweight"`` or
        ``"epanechnikov"``.

    Examples
    --------
    >>> K = KernelSpec("cosine_squared")
    >>> float(K(0.5))
    0.5000000000000001
    """

    kind: KernelKind = KernelKind.COSINE_SQUARED

    def __post_init__(self):
        object.__setattr__(self, "kind", KernelKind(self.kind))

    @property
    def name(self):
        return self.kind.value

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        inside = np.abs(t) <= 1.0
        # evaluate on the clipped argument so nothing outside the support leaks
        return np.where(inside, _PROFILES[self.kind](np.clip(t, -1.0, 1.0)), 0.0)


def eval_kernel(spec, t):
    """Evaluate ``spec`` at ``t`` (scalar or array); zero outside [-1, 1]."""
    out = spec(t)
    return float(out) if out.ndim == 0 else out


def _gauss_legendre(func, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    return half * float(np.dot(_GL_WEIGHTS, func(mid + half * _GL_NODES)))


def integrate(func, a=-1.0, b=1.0, tol=1e-12, max_depth=30):
    """Integrate a vectorised ``func`` over [a, b].

    A 64-node Gauss-Legendre rule is applied to the whole interval and to its
    two halves; when they disagree by more than ``tol`` the halves are refined
    recursively.

    Raises
    ------
    QuadratureError
        If the bisection depth is exhausted before reaching ``tol``.
    """

    def recurse(lo, hi, whole, tol, depth):
        mid = 0.5 * (lo + hi)
        left = _gauss_legendre(func, lo, mid)
        right = _gauss_legendre(func, mid, hi)
        if abs(left + right - whole) <= tol:
            return left + right
        if depth >= max_depth:
            raise QuadratureError(
                f"no convergence on [{lo}, {hi}] after {depth} bisections"
            )
        return recurse(lo, mid, left, 0.5 * tol, depth + 1) + recurse(
            mid, hi, right, 0.5 * tol, depth + 1
        )

    return recurse(a, b, _gauss_legendre(func, a, b), tol, 0)


@lru_cache(maxsize=None)
def kernel_moment(spec, j, squared=False):
    """Return ``mu_j = int t^j K(t) dt`` or, if ``squared``, ``nu_j = int t^j K(t)^2 dt``.

    Odd moments are computed too (they vanish up to rounding) so that the
    symmetry of a kernel can be checked rather than assumed.
    """
    if j < 0:
        raise ValueError(f"moment order must be non-negative, got {j}")
    power = 2 if squared else 1
    return integrate(lambda t: t**j * spec(t) ** power)


def _readonly(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class MomentTable:
    """Kernel moment matrices for a local polynomial fit of degree ``degree``.

    Attributes
    ----------
    degree : int
    mu : ndarray, shape (2k+2,)
        ``mu_0 .. mu_{2k+1}``.
    nu : ndarray, shape (2k+1,)
        ``nu_0 .. nu_{2k}``.
    S, S_star : ndarray, shape (k+1, k+1)
        Hankel matrices ``[mu_{j+l}]`` and ``[nu_{j+l}]``.
    u : ndarray, shape (k+1,)
        First row of ``S^{-1}`` (the solution of ``S u = e1``).
    C : float
        Variance constant ``u' S_star u``.
    """

    spec: KernelSpec
    degree: int
    mu: np.ndarray = field(repr=False)
    nu: np.ndarray = field(repr=False)
    S: np.ndarray = field(repr=False)
    S_star: np.ndarray = field(repr=False)
    u: np.ndarray
    C: float

    def to_dict(self):
        return {
            "kernel": self.spec.name,
            "degree": self.degree,
            "mu": self.mu.tolist(),
            "nu": self.nu.tolist(),
            "S": self.S.tolist(),
            "S_star": self.S_star.tolist(),
            "u": self.u.tolist(),
            "C": self.C,
        }


def _hankel(m, size):
    idx = np.add.outer(np.arange(size), np.arange(size))
    return m[idx]


@lru_cache(maxsize=None)
def build_moment_table(spec, k):
    """Compute moments, ``S``, ``S*``, ``u`` and ``C`` for degree ``k``.

    Raises
    ------
    ValueError
        If ``k`` is outside ``0 .. MAX_DEGREE``.
    numpy.linalg.LinAlgError
        If ``S`` is singular, which only happens for a broken kernel.
    """
    if not 0 <= k <= MAX_DEGREE:
        raise ValueError(f"degree must lie in 0..{MAX_DEGREE}, got {k}")
    mu = np.array([kernel_moment(spec, j) for j in range(2 * k + 2)])
    nu = np.array([kernel_moment(spec, j, squared=True) for j in range(2 * k + 1)])
    S = _hankel(mu, k + 1)
    S_star = _hankel(nu, k + 1)
    e1 = np.zeros(k + 1)
    e1[0] = 1.0
    u = np.linalg.solve(S, e1)
    # one refinement step; S gets poorly conditioned for k near the cap
    u += np.linalg.solve(S, e1 - S @ u)
    C = float(u @ S_star @ u)
    return MomentTable(
        spec=spec,
        degree=k,
        mu=_readonly(mu),
        nu=_readonly(nu),
        S=_readonly(S),
        S_star=_readonly(S_star),
        u=_readonly(u),
        C=C,
    )


def equivalent_kernel(table, t):
    """Evaluate ``K0*(t) = sum_j u_j t^j K(t)`` for the table's kernel."""
    t = np.asarray(t, dtype=float)
    poly = np.polynomial.polynomial.polyval(t, table.u)
    out = poly * table.spec(t)
    return float(out) if out.ndim == 0 else out
