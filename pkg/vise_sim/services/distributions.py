"""Proposal distributions for the vise-sim simulator.

This module provides closed-form densities, CDFs and quantiles of the
symmetrized Pareto (SP) family, the CDFs of its Laplace limit and of the
standardized Student t-distribution with three degrees of freedom, and
seedable samplers for all four proposal families.

All families are parameterized by mean ``mu`` and standard deviation
``sigma``. The SP scale ``a`` is derived from ``sigma`` and the tail index
``k``; the t3 variable is ``mu + (sigma / sqrt(3)) * T`` so that its variance
is ``sigma**2``.
"""

import math
from typing import Protocol

import numpy as np
import numpy.typing as npt
from scipy import special

from vise_sim.errors import DomainError
from vise_sim.models import DistributionSpec, Family, FloatArray

K_MIN = 2.0 + 1e-6
"""Smallest accepted SP tail index; the variance diverges at k = 2."""

_SQRT2 = math.sqrt(2.0)
_SQRT3 = math.sqrt(3.0)
_MANTISSA_BITS = 53

FloatOrArray = float | FloatArray


class ProposalSampler(Protocol):
    """Draws ``size`` i.i.d. increments from a fixed distribution."""

    def __call__(self, rng: np.random.Generator, size: int) -> FloatArray: ...


def _check_sigma(sigma: float) -> None:
    if not sigma > 0.0:
        raise DomainError(f"sigma must be positive, got {sigma}")


def _check_k(k: float | None) -> float:
    if k is None:
        raise DomainError("the symmetrized Pareto family needs a tail index k")
    if not k > K_MIN:
        raise DomainError(
            f"tail index k must exceed 2 (variance exists only for k > 2), got {k}"
        )
    return k


def validate_spec(spec: DistributionSpec) -> None:
    """Check the parameter domain of a distribution spec.

    Raises:
        DomainError: If sigma <= 0, mu is not finite, or an SP spec has no
            valid tail index.
    """
    _check_sigma(spec.sigma)
    if not math.isfinite(spec.mu):
        raise DomainError(f"mu must be finite, got {spec.mu}")
    if spec.family is Family.SYMMETRIZED_PARETO:
        _check_k(spec.k)


def _require_sp(spec: DistributionSpec) -> float:
    if spec.family is not Family.SYMMETRIZED_PARETO:
        raise DomainError(f"expected a symmetrized Pareto spec, got {spec.family}")
    validate_spec(spec)
    return sp_scale(_check_k(spec.k), spec.sigma)


def _as_output(values: npt.NDArray[np.float64]) -> FloatOrArray:
    if values.ndim == 0:
        return float(values)
    return values


def sp_scale(k: float, sigma: float) -> float:
    """Scale ``a`` for which the SP density with tail index ``k`` has std ``sigma``.

    Raises:
        DomainError: If k <= 2 or sigma <= 0.
    """
    _check_k(k)
    _check_sigma(sigma)
    return sigma * math.sqrt((k - 1.0) * (k - 2.0) / 2.0)


def sp_pdf(x: npt.ArrayLike, spec: DistributionSpec) -> FloatOrArray:
    """Density ``k/(2a) * (|x - mu|/a + 1) ** -(k + 1)`` of an SP distribution."""
    a = _require_sp(spec)
    k = float(spec.k)  # type: ignore[arg-type]
    d = np.abs(np.asarray(x, dtype=np.float64) - spec.mu) / a
    return _as_output(k / (2.0 * a) * np.power(d + 1.0, -(k + 1.0)))


def sp_cdf(x: npt.ArrayLike, spec: DistributionSpec) -> FloatOrArray:
    """Two-branch closed-form CDF of an SP distribution."""
    a = _require_sp(spec)
    k = float(spec.k)  # type: ignore[arg-type]
    d = (np.asarray(x, dtype=np.float64) - spec.mu) / a
    tail = 0.5 * np.power(1.0 + np.abs(d), -k)
    return _as_output(np.where(d <= 0.0, tail, 1.0 - tail))


def sp_quantile(u: npt.ArrayLike, spec: DistributionSpec) -> FloatOrArray:
    """Inverse of :func:`sp_cdf`.

    Raises:
        DomainError: If any ``u`` lies outside the open interval (0, 1).
    """
    a = _require_sp(spec)
    k = float(spec.k)  # type: ignore[arg-type]
    probs = np.asarray(u, dtype=np.float64)
    if not np.all((probs > 0.0) & (probs < 1.0)):
        raise DomainError("quantile probabilities must lie strictly inside (0, 1)")
    tail = 2.0 * np.minimum(probs, 1.0 - probs)
    d = a * (np.power(tail, -1.0 / k) - 1.0)
    return _as_output(spec.mu + np.where(probs > 0.5, d, -d))


def laplace_cdf(x: npt.ArrayLike, mu: float, sigma: float) -> FloatOrArray:
    """CDF of the Laplace distribution with mean ``mu`` and std ``sigma``.

    This is the k -> infinity limit of the SP family.
    """
    _check_sigma(sigma)
    d = np.asarray(x, dtype=np.float64) - mu
    tail = 0.5 * np.exp(-np.abs(d) * _SQRT2 / sigma)
    return _as_output(np.where(d <= 0.0, tail, 1.0 - tail))


def t3_cdf(x: npt.ArrayLike, mu: float, sigma: float) -> FloatOrArray:
    """CDF of ``mu + (sigma / sqrt(3)) * T`` with T Student-t, 3 degrees of freedom.

    With ``v = (x - mu) / sigma`` the closed form is
    ``1/2 + (atan(v) + v / (1 + v**2)) / pi``. The smaller tail is taken from
    ``scipy.special.stdtr`` on ``-sqrt(3) * |v|``; the closed form cancels to
    zero (and below) once ``|v|`` is large.
    """
    _check_sigma(sigma)
    v = np.abs((np.asarray(x, dtype=np.float64) - mu) / sigma)
    tail = special.stdtr(3, -_SQRT3 * v)
    below = np.asarray(x, dtype=np.float64) <= mu
    return _as_output(np.where(below, tail, 1.0 - tail))


def normal_cdf(x: npt.ArrayLike, mu: float, sigma: float) -> FloatOrArray:
    _check_sigma(sigma)
    return _as_output(special.ndtr((np.asarray(x, dtype=np.float64) - mu) / sigma))


def cdf(x: npt.ArrayLike, spec: DistributionSpec) -> FloatOrArray:
    """CDF of any supported family."""
    validate_spec(spec)
    match spec.family:
        case Family.SYMMETRIZED_PARETO:
            return sp_cdf(x, spec)
        case Family.LAPLACE:
            return laplace_cdf(x, spec.mu, spec.sigma)
        case Family.STUDENT_T3:
            return t3_cdf(x, spec.mu, spec.sigma)
        case Family.NORMAL:
            return normal_cdf(x, spec.mu, spec.sigma)


def open_uniform(rng: np.random.Generator, size: int) -> FloatArray:
    """Uniform draws on the open interval (0, 1); both endpoints are excluded."""
    bits = rng.integers(0, 1 << _MANTISSA_BITS, size=size, dtype=np.int64)
    return (bits.astype(np.float64) + 0.5) * 2.0**-_MANTISSA_BITS


def make_sampler(spec: DistributionSpec) -> ProposalSampler:
    """Build a sampler for ``spec`` with its parameters validated once.

    SP draws use the inverse-CDF transform, the normal and Laplace families
    use numpy's generators, and t3 draws are standardized Student-t draws.
    """
    validate_spec(spec)
    mu, sigma = spec.mu, spec.sigma

    match spec.family:
        case Family.SYMMETRIZED_PARETO:
            k = float(spec.k)  # type: ignore[arg-type]
            a = sp_scale(k, sigma)

            def draw_sp(rng: np.random.Generator, size: int) -> FloatArray:
                u = open_uniform(rng, size)
                d = a * (np.power(2.0 * np.minimum(u, 1.0 - u), -1.0 / k) - 1.0)
                return mu + np.where(u > 0.5, d, -d)

            return draw_sp
        case Family.NORMAL:

            def draw_normal(rng: np.random.Generator, size: int) -> FloatArray:
                return rng.normal(mu, sigma, size)

            return draw_normal
        case Family.STUDENT_T3:
            scale = sigma / _SQRT3

            def draw_t3(rng: np.random.Generator, size: int) -> FloatArray:
                return mu + scale * rng.standard_t(3, size)

            return draw_t3
        case Family.LAPLACE:
            b = sigma / _SQRT2

            def draw_laplace(rng: np.random.Generator, size: int) -> FloatArray:
                return rng.laplace(mu, b, size)

            return draw_laplace


def sample(spec: DistributionSpec, rng: np.random.Generator, n: int) -> FloatArray:
    """Draw ``n`` i.i.d. increments from ``spec``, advancing ``rng``.

    Raises:
        DomainError: If n < 1 or the distribution is outside its domain.
    """
    if n < 1:
        raise DomainError(f"sample size must be at least 1, got {n}")
    return make_sampler(spec)(rng, n)
