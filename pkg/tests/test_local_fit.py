import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hpfrontier.exceptions import EmptyWindow
from hpfrontier.frontier import EstimatorConfig
from hpfrontier.kernels import KernelSpec, build_moment_table, equivalent_kernel
from hpfrontier.local_fit import (
    DesignSystem,
    Sample,
    assemble_system,
    local_fit_at,
    power_transform,
    solve_fit,
)

COS2 = KernelSpec()


def raw_wls(x_obs, z, x, h, k, kernel=COS2):
    """Weighted least squares in raw (X - x) powers via an orthogonal solver."""
    d = x_obs - x
    w = kernel(d / h) / h
    keep = w > 0
    X = d[keep, None] ** np.arange(k + 1)
    sw = np.sqrt(w[keep])
    beta, *_ = np.linalg.lstsq(X * sw[:, None], z[keep] * sw, rcond=None)
    return beta


def test_sample_validation():
    with pytest.raises(ValueError):
        Sample([0.1, 0.2], [0.3, -0.1])
    with pytest.raises(ValueError):
        Sample([0.1, 0.2], [0.3])
    with pytest.raises(ValueError):
        Sample([], [])
    s = Sample([0.3, 0.1], [1.0, 2.0])
    assert len(s) == 2
    np.testing.assert_array_equal(s.sorted().x, [0.1, 0.3])
    with pytest.raises(ValueError):
        s.x[0] = 5.0


def test_power_transform_examples():
    np.testing.assert_array_equal(power_transform([1.0, 1.0], 3, 1.0), [4.0, 4.0])
    np.testing.assert_allclose(power_transform([0.5], 1, 1.0), [1.0], rtol=1e-15)
    out = power_transform([0.9, 1.2], 22, 1.2)
    np.testing.assert_allclose(out, [23 * 0.75**22, 23.0], rtol=1e-13)
    assert power_transform([0.0, 2.0], 5, 2.0)[0] == 0.0


def test_power_transform_survives_huge_powers():
    out = power_transform([1e-3, 5e-4], 400, 1e-3)
    assert out[0] == 401.0
    assert out[1] == pytest.approx(401 * 0.5**400)


@pytest.mark.parametrize("p, scale", [(0.5, 1.0), (2.0, 0.0)])
def test_power_transform_rejects(p, scale):
    with pytest.raises(ValueError):
        power_transform([1.0], p, scale)


def test_assemble_empty_window():
    sys_ = assemble_system([5.0, 6.0], 0.0, 0.1, 2, COS2, [1.0, 1.0])
    assert not sys_.normal_matrix.any()
    assert not sys_.rhs.any()


def test_assemble_single_point():
    h, c = 0.2, 3.5
    sys_ = assemble_system([0.4], 0.4, h, 0, COS2, [c])
    np.testing.assert_allclose(sys_.normal_matrix, [[1.0 / h]])
    np.testing.assert_allclose(sys_.rhs, [c / h])


def test_assemble_concentrates_on_kernel_moments():
    # normal_matrix[j, l] / (n f mu_{j+l}) -> 1 for a uniform design on [0, 1]
    n, h = 200_000, 0.05
    x = np.random.default_rng(3).random(n)
    sys_ = assemble_system(x, 0.5, h, 1, COS2, np.ones(n))
    mu = build_moment_table(COS2, 1).mu
    assert sys_.normal_matrix[0, 0] / (n * mu[0]) == pytest.approx(1.0, abs=0.03)
    assert sys_.normal_matrix[1, 1] / (n * mu[2]) == pytest.approx(1.0, abs=0.05)
    assert abs(sys_.normal_matrix[0, 1]) / n < 0.02


def test_solve_exact_line():
    sys_ = assemble_system([-0.5, 0.5], 0.0, 1.0, 1, COS2, [1.0, 3.0])
    beta, cond, d = solve_fit(sys_, 1, 2)
    np.testing.assert_allclose(beta, [2.0, 2.0], rtol=1e-14)
    assert d == 1
    assert cond >= 1


@settings(max_examples=50, deadline=None)
@given(
    st.integers(0, 3),
    st.floats(0.01, 100.0),
    st.lists(st.floats(-1.0, 1.0), min_size=6, max_size=40, unique=True),
)
def test_solve_constant_response(k, c, xs):
    xs = np.array(xs)
    sys_ = assemble_system(xs, 0.0, 1.2, k, COS2, np.full(xs.size, c))
    beta, _, d = solve_fit(sys_, k, xs.size)
    assert beta[0] == pytest.approx(c, rel=1e-9)
    np.testing.assert_allclose(beta[1:], 0.0, atol=1e-8 * c)


def test_solve_forced_fallback():
    sys_ = assemble_system([0.1], 0.0, 0.5, 1, COS2, [7.0])
    beta, cond, d = solve_fit(sys_, 1, 1)
    assert d == 0
    np.testing.assert_allclose(beta, [7.0, 0.0])


def test_solve_fallback_on_collinear_design():
    # two distinct points cannot pin a quadratic
    sys_ = assemble_system([0.1, 0.1, -0.2], 0.0, 0.5, 2, COS2, [1.0, 1.0, 2.0])
    _, _, d = solve_fit(sys_, 2, 3)
    assert d == 1


def test_solve_empty_raises():
    empty = DesignSystem(np.zeros((2, 2)), np.zeros(2))
    with pytest.raises(EmptyWindow):
        solve_fit(empty, 1, 0)


def test_local_fit_empty_window():
    s = Sample([0.0, 0.1], [1.0, 1.0])
    with pytest.raises(EmptyWindow):
        local_fit_at(s, 0.8, EstimatorConfig(1, 0.1, 5.0))


def test_local_fit_constant_responses(rng):
    x = rng.random(60)
    c = 0.37
    s = Sample(x, np.full(60, c))
    for p in (1.0, 7.5, 40.0):
        fit = local_fit_at(s, 0.5, EstimatorConfig(0, 0.2, p))
        assert fit.scale == c
        assert fit.beta0_scaled == pytest.approx(p + 1, rel=1e-14)


def test_local_fit_all_zero_window():
    s = Sample([0.4, 0.5, 0.6], [0.0, 0.0, 0.0])
    fit = local_fit_at(s, 0.5, EstimatorConfig(1, 0.2, 3.0))
    assert fit.scale == 1.0
    assert fit.beta0_scaled == 0.0


def test_k0_is_kernel_weighted_mean(rng):
    for _ in range(50):
        n = 80
        x, y = rng.random(n), rng.random(n)
        h, p, x0 = rng.uniform(0.05, 0.4), rng.uniform(1, 30), rng.uniform(0.2, 0.8)
        fit = local_fit_at(Sample(x, y), x0, EstimatorConfig(0, h, p))
        w = COS2((x - x0) / h) / h
        z = (p + 1) * (y / fit.scale) ** p
        assert fit.beta0_scaled == pytest.approx(np.sum(w * z) / np.sum(w), rel=1e-12)


def test_local_linear_matches_equivalent_kernel():
    # for a large uniform design the intercept is close to
    # (1/(n h f)) sum z_i K0*((X_i - x)/h)
    n, h, p, x0 = 100_000, 0.05, 3.0, 0.5
    gen = np.random.default_rng(11)
    x = gen.random(n)
    y = gen.random(n) * (1.0 + x)
    s = Sample(x, y)
    fit = local_fit_at(s, x0, EstimatorConfig(1, h, p))
    table = build_moment_table(COS2, 1)
    z = power_transform(y, p, fit.scale)
    oracle = np.sum(z * equivalent_kernel(table, (x - x0) / h)) / (n * h)
    assert fit.beta0_scaled == pytest.approx(oracle, rel=0.05)


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_residual_orthogonality(rng, k):
    n, h, p, x0 = 300, 0.15, 4.0, 0.45
    x, y = rng.random(n), rng.random(n)
    fit = local_fit_at(Sample(x, y), x0, EstimatorConfig(k, h, p))
    d = x - x0
    mask = np.abs(d) <= h
    d, z = d[mask], power_transform(y[mask], p, fit.scale)
    w = COS2(d / h) / h
    beta_raw = fit.beta_scaled / h ** np.arange(k + 1)
    resid = z - np.polynomial.polynomial.polyval(d, beta_raw)
    for l in range(fit.degraded_to + 1):
        lhs = np.sum(w * resid * d**l)
        scale = np.sum(w * np.abs(z) * np.abs(d) ** l)
        assert abs(lhs) <= 1e-8 * scale


@pytest.mark.parametrize("k", [1, 2])
def test_reparametrisation_invariance(rng, k):
    n, h, p, x0 = 400, 0.1, 6.0, 0.5
    x, y = rng.random(n), rng.random(n)
    fit = local_fit_at(Sample(x, y), x0, EstimatorConfig(k, h, p))
    mask = np.abs(x - x0) <= h
    z = power_transform(y[mask], p, fit.scale)
    beta = raw_wls(x[mask], z, x0, h, k)
    assert fit.beta0_scaled == pytest.approx(beta[0], rel=1e-12)


def test_translation_equivariance(rng):
    n, h, p = 200, 0.12, 9.0
    x, y = rng.random(n), rng.random(n)
    base = local_fit_at(Sample(x, y), 0.5, EstimatorConfig(1, h, p))
    for shift in (3.0, -7.25, 0.125):
        moved = local_fit_at(Sample(x + shift, y), 0.5 + shift, EstimatorConfig(1, h, p))
        assert moved.window_count == base.window_count
        assert moved.degraded_to == base.degraded_to
        assert moved.scale == base.scale
        np.testing.assert_allclose(moved.beta_scaled, base.beta_scaled, rtol=1e-12, atol=1e-12)


def test_scale_equivariance(rng):
    n, h, p = 200, 0.12, 9.0
    x, y = rng.random(n), rng.random(n)
    base = local_fit_at(Sample(x, y), 0.5, EstimatorConfig(1, h, p))
    for c in (1e-3, 2.5, 1e3):
        fit = local_fit_at(Sample(x, c * y), 0.5, EstimatorConfig(1, h, p))
        assert fit.scale == pytest.approx(c * base.scale, rel=1e-15)
        assert fit.beta0_scaled == pytest.approx(base.beta0_scaled, rel=1e-12)
        est = fit.scale * fit.beta0_scaled ** (1 / p)
        assert est == pytest.approx(c * base.scale * base.beta0_scaled ** (1 / p), rel=1e-12)
