"""Tail-heaviness functions of the proposal distributions.

``w(z)`` is the probability that a variable deviates from its mean by at
least ``z`` standard deviations: ``w(z) = F(mu - z*sigma) + 1 - F(mu + z*sigma)``.
It does not depend on ``mu`` or ``sigma`` for any supported family.
"""

from collections.abc import Sequence
import logging
import math

import numpy as np
import numpy.typing as npt
from scipy import optimize, special, stats

from vise_sim.errors import DomainError
from vise_sim.models import DistributionSpec, Family

from .distributions import FloatOrArray, cdf, t3_cdf, validate_spec

logger = logging.getLogger(__name__)

_SQRT2 = math.sqrt(2.0)
_SQRT3 = math.sqrt(3.0)
_LOG2 = math.log(2.0)


def _z_values(z: npt.ArrayLike) -> npt.NDArray[np.float64]:
    values = np.asarray(z, dtype=np.float64)
    if np.any(np.isnan(values)) or np.any(values < 0.0):
        raise DomainError("tail-heaviness argument z must be non-negative")
    return values


def _sp_rate(k: float) -> float:
    return math.sqrt(2.0 / ((k - 1.0) * (k - 2.0)))


def _as_output(values: npt.NDArray[np.float64]) -> FloatOrArray:
    if values.ndim == 0:
        return float(values)
    return values


def tail_heaviness(spec: DistributionSpec, z: npt.ArrayLike) -> FloatOrArray:
    """Closed-form ``w(z)`` for the family of ``spec``.

    Raises:
        DomainError: If z < 0 or the distribution has no variance.
    """
    validate_spec(spec)
    zs = _z_values(z)
    match spec.family:
        case Family.SYMMETRIZED_PARETO:
            k = float(spec.k)  # type: ignore[arg-type]
            w = np.power(1.0 + zs * _sp_rate(k), -k)
        case Family.LAPLACE:
            w = np.exp(-zs * _SQRT2)
        case Family.NORMAL:
            w = special.erfc(zs / _SQRT2)
        case Family.STUDENT_T3:
            w = 2.0 * np.asarray(t3_cdf(-zs, 0.0, 1.0))
    return _as_output(w)


def log_tail_heaviness(spec: DistributionSpec, z: npt.ArrayLike) -> FloatOrArray:
    """Natural logarithm of ``w(z)``, evaluated without forming ``w`` itself.

    Stays finite for arguments such as z = 1e11 where ``w`` underflows or
    loses all precision in linear space.
    """
    validate_spec(spec)
    zs = _z_values(z)
    match spec.family:
        case Family.SYMMETRIZED_PARETO:
            k = float(spec.k)  # type: ignore[arg-type]
            log_w = -k * np.log1p(zs * _sp_rate(k))
        case Family.LAPLACE:
            log_w = -zs * _SQRT2
        case Family.NORMAL:
            log_w = _LOG2 + special.log_ndtr(-zs)
        case Family.STUDENT_T3:
            log_w = _LOG2 + stats.t.logsf(zs * _SQRT3, 3)
    return _as_output(np.asarray(log_w, dtype=np.float64))


def tail_heaviness_from_cdf(spec: DistributionSpec, z: npt.ArrayLike) -> FloatOrArray:
    """``w(z)`` evaluated directly from the family's CDF."""
    zs = _z_values(z)
    lower = np.asarray(cdf(spec.mu - zs * spec.sigma, spec))
    upper = np.asarray(cdf(spec.mu + zs * spec.sigma, spec))
    return _as_output(lower + 1.0 - upper)


def heaviest_family(specs: Sequence[DistributionSpec], z: float) -> int:
    """Index of the distribution with the largest ``w(z)``; the first wins on ties."""
    if not specs:
        raise ValueError("heaviest_family needs at least one distribution")
    log_ws = [float(log_tail_heaviness(spec, z)) for spec in specs]
    return int(np.argmax(log_ws))


def find_tail_crossing(
    first: DistributionSpec,
    second: DistributionSpec,
    z_min: float,
    z_max: float,
    *,
    grid_points: int = 4000,
) -> float | None:
    """Locate the first ``z`` in ``[z_min, z_max]`` where the two ``w`` curves cross.

    The difference of the log tail-heaviness curves is scanned on a
    geometric grid and the first sign change is refined with Brent's method
    in ``log z``.

    Returns:
        The crossing point, or None when the curves do not cross in range.
    """
    if not 0.0 < z_min < z_max:
        raise DomainError(f"crossing search needs 0 < z_min < z_max, got {z_min}, {z_max}")

    def gap(log_z: float) -> float:
        z = math.exp(log_z)
        return float(log_tail_heaviness(first, z)) - float(log_tail_heaviness(second, z))

    grid = np.linspace(math.log(z_min), math.log(z_max), grid_points)
    values = np.array([gap(float(s)) for s in grid])
    signs = np.sign(values)
    changes = np.flatnonzero(signs[:-1] * signs[1:] < 0.0)
    if changes.size == 0:
        exact = np.flatnonzero(values == 0.0)
        return float(math.exp(grid[exact[0]])) if exact.size else None

    i = int(changes[0])
    root = optimize.brentq(gap, float(grid[i]), float(grid[i + 1]), xtol=1e-14)
    crossing = math.exp(float(root))
    logger.debug(f"Tail curves {first.label} and {second.label} cross at z={crossing:.6g}")
    return crossing
