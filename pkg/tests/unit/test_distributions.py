"""Unit tests for the proposal distributions."""

import math

import numpy as np
import pytest
from scipy import integrate, stats

from vise_sim.errors import DomainError
from vise_sim.models import DistributionSpec, Family
from vise_sim.services.distributions import (
    cdf,
    laplace_cdf,
    make_sampler,
    open_uniform,
    sample,
    sp_cdf,
    sp_pdf,
    sp_quantile,
    sp_scale,
    t3_cdf,
)


def sp(k: float, mu: float = 0.0, sigma: float = 1.0) -> DistributionSpec:
    return DistributionSpec(Family.SYMMETRIZED_PARETO, mu=mu, sigma=sigma, k=k)


def sp_variance_by_quadrature(k: float, sigma: float = 1.0) -> float:
    """Second central moment of the SP density, integrated numerically.

    Uses d = a(1 - t)/t to map (0, inf) onto (0, 1]. The transformed integrand
    behaves like t**(k - 3) near zero, so for k < 3 that factor is handled by
    an algebraic quadrature weight.
    """
    spec = sp(k, sigma=sigma)
    a = sp_scale(k, sigma)

    def moment_density(t: float) -> float:
        d = a * (1.0 - t) / t
        return 2.0 * d * d * float(sp_pdf(d, spec)) * a / (t * t)

    if k < 3.0:

        def smooth_part(t: float) -> float:
            if t <= 0.0:
                return a * a * k
            return moment_density(t) * t ** (3.0 - k)

        value, _ = integrate.quad(smooth_part, 0.0, 1.0, weight="alg", wvar=(k - 3.0, 0.0))
    else:
        value, _ = integrate.quad(moment_density, 0.0, 1.0, limit=200)
    return value


def test_sp_scale_matches_closed_form() -> None:
    """Test the scale a = sigma * sqrt((k-1)(k-2)/2)."""
    assert math.isclose(sp_scale(20.0, 1.0), math.sqrt(171.0))
    assert math.isclose(sp_scale(3.0, 80.0), 80.0)


@pytest.mark.parametrize("k", [2.1, 3.0, 20.0, 200.0, 1000.0])
def test_sp_variance_equals_sigma_squared(k: float) -> None:
    """Test that the scale choice gives the SP density variance sigma**2."""
    assert math.isclose(sp_variance_by_quadrature(k), 1.0, rel_tol=1e-4)


def test_sp_density_integrates_to_one() -> None:
    """Test that the SP density is normalized."""
    spec = sp(20.0, mu=3.0, sigma=2.0)
    half, _ = integrate.quad(lambda x: float(sp_pdf(x, spec)), 3.0, np.inf)
    assert math.isclose(2.0 * half, 1.0, rel_tol=1e-8)


def test_sp_cdf_at_mean_is_one_half() -> None:
    """Test that the SP CDF is 1/2 at mu."""
    assert sp_cdf(-7.0, sp(3.0, mu=-7.0)) == 0.5


def test_sp_cdf_is_symmetric() -> None:
    """Test F(mu - d) + F(mu + d) = 1."""
    spec = sp(2.5, mu=1.5, sigma=4.0)
    d = np.array([0.1, 1.0, 10.0, 1e4])
    total = np.asarray(sp_cdf(1.5 - d, spec)) + np.asarray(sp_cdf(1.5 + d, spec))
    np.testing.assert_allclose(total, 1.0, rtol=0, atol=1e-15)


@pytest.mark.parametrize("k", [2.01, 3.0, 20.0])
def test_sp_quantile_inverts_cdf(k: float) -> None:
    """Test |F(Q(u)) - u| < 1e-12 on a dense grid of probabilities."""
    spec = sp(k)
    u = np.linspace(1e-6, 1.0 - 1e-6, 10_000)
    roundtrip = np.asarray(sp_cdf(sp_quantile(u, spec), spec))
    assert np.max(np.abs(roundtrip - u)) < 1e-12


@pytest.mark.parametrize("u", [0.0, 1.0, -0.5, 1.5])
def test_sp_quantile_rejects_closed_endpoints(u: float) -> None:
    """Test that quantiles exist only on the open interval."""
    with pytest.raises(DomainError):
        sp_quantile(u, sp(20.0))


def test_sp_rejects_tail_index_without_variance() -> None:
    """Test that k <= 2 and a missing k are domain errors."""
    with pytest.raises(DomainError, match="exceed 2"):
        sp_cdf(0.0, sp(2.0))
    with pytest.raises(DomainError, match="tail index"):
        sp_cdf(0.0, DistributionSpec(Family.SYMMETRIZED_PARETO))
    with pytest.raises(DomainError):
        sp_scale(1.5, 1.0)


def test_sigma_must_be_positive() -> None:
    """Test that every family rejects sigma <= 0."""
    with pytest.raises(DomainError, match="sigma"):
        cdf(0.0, DistributionSpec(Family.NORMAL, sigma=0.0))
    with pytest.raises(DomainError):
        laplace_cdf(0.0, 0.0, -1.0)
    with pytest.raises(DomainError):
        make_sampler(DistributionSpec(Family.STUDENT_T3, sigma=-2.0))


def test_t3_cdf_matches_scipy() -> None:
    """Test the closed-form t3 CDF against scipy's Student t."""
    x = np.array([-50.0, -3.0, -0.2, 0.0, 0.7, 4.0, 120.0])
    expected = stats.t.cdf((x - 2.0) / (5.0 / math.sqrt(3.0)), 3)
    np.testing.assert_allclose(t3_cdf(x, 2.0, 5.0), expected, rtol=1e-10)


def test_t3_cdf_far_tail() -> None:
    """Test the t3 lower tail far from the mean.

    For v = (mu - x) / sigma large the tail is 2 / (3 pi v**3) up to a
    relative correction of order 1 / v**2.
    """
    v = np.geomspace(1e4, 1e9, 200)
    lower = np.asarray(t3_cdf(-v, 0.0, 1.0))
    assert np.all(lower > 0.0)
    assert np.all(np.diff(lower) < 0.0)
    np.testing.assert_allclose(lower, 2.0 / (3.0 * math.pi * v**3), rtol=1e-6)
    np.testing.assert_allclose(lower, stats.t.sf(math.sqrt(3.0) * v, 3), rtol=1e-10)


def test_sp_cdf_derivative_is_the_density() -> None:
    """Test a central difference of the SP CDF against the closed-form density."""
    spec = sp(2.5, mu=-3.0, sigma=4.0)
    x = np.array([-40.0, -10.0, -3.5, -2.5, 1.0, 20.0])
    h = 1e-5
    slope = (np.asarray(sp_cdf(x + h, spec)) - np.asarray(sp_cdf(x - h, spec))) / (2.0 * h)
    np.testing.assert_allclose(slope, sp_pdf(x, spec), rtol=1e-6)


def test_sp_cdf_approaches_a_step_as_k_tends_to_two() -> None:
    """Test that almost no mass lies below mu - sigma for k = 2.0001."""
    spec = sp(2.0001, mu=5.0, sigma=2.0)
    assert float(sp_cdf(3.0, spec)) < 1e-3
    assert float(sp_cdf(7.0, spec)) > 1.0 - 1e-3


def test_sp_cdf_converges_to_laplace() -> None:
    """Test sup |F_k - F_laplace| on [mu - 10 sigma, mu + 10 sigma] as k grows."""
    x = np.linspace(-8.0 - 30.0, -8.0 + 30.0, 20_001)

    def sup_gap(k: float) -> float:
        spec = sp(k, mu=-8.0, sigma=3.0)
        return float(np.max(np.abs(np.asarray(sp_cdf(x, spec)) - np.asarray(laplace_cdf(x, -8.0, 3.0)))))

    gaps = [sup_gap(k) for k in (10.0, 100.0, 1000.0)]
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < 1e-3


def test_laplace_cdf_matches_scipy() -> None:
    """Test the Laplace CDF parameterized by standard deviation."""
    x = np.array([-10.0, -1.0, 0.5, 3.0])
    expected = stats.laplace.cdf(x, loc=0.5, scale=2.0 / math.sqrt(2.0))
    np.testing.assert_allclose(laplace_cdf(x, 0.5, 2.0), expected, rtol=1e-12)


def test_open_uniform_excludes_endpoints() -> None:
    """Test that uniform draws never hit 0 or 1."""
    u = open_uniform(np.random.default_rng(7), 100_000)
    assert u.min() > 0.0
    assert u.max() < 1.0


def test_sample_is_reproducible() -> None:
    """Test that equal seeds give equal draws."""
    spec = sp(20.0, mu=-3.0, sigma=80.0)
    first = sample(spec, np.random.default_rng(123), 50)
    second = sample(spec, np.random.default_rng(123), 50)
    np.testing.assert_array_equal(first, second)


def test_sample_rejects_empty_draw() -> None:
    """Test that n must be at least one."""
    with pytest.raises(DomainError, match="at least 1"):
        sample(DistributionSpec(Family.NORMAL), np.random.default_rng(0), 0)


def test_sp_sample_variance() -> None:
    """Test the Monte Carlo variance of 10**6 SP(k=20, sigma=80) draws."""
    draws = sample(sp(20.0, sigma=80.0), np.random.default_rng(2024), 1_000_000)
    assert abs(draws.var() - 6400.0) < 0.02 * 6400.0
    assert abs(draws.mean()) < 1.0


@pytest.mark.parametrize(
    "spec",
    [
        DistributionSpec(Family.NORMAL, mu=5.0, sigma=80.0),
        DistributionSpec(Family.STUDENT_T3, mu=5.0, sigma=80.0),
        DistributionSpec(Family.LAPLACE, mu=5.0, sigma=80.0),
        sp(2.3, mu=5.0, sigma=80.0),
        sp(20.0, mu=5.0, sigma=80.0),
    ],
    ids=lambda spec: spec.label,
)
def test_samplers_follow_their_cdf(spec: DistributionSpec) -> None:
    """Test every sampler against its own CDF with a Kolmogorov-Smirnov test."""
    draws = sample(spec, np.random.default_rng(99), 5_000)
    result = stats.kstest(draws, lambda x: np.asarray(cdf(x, spec)))
    assert result.pvalue > 1e-3
