"""Moment-matched gamma approximation with continuity correction.

The discrete mass at t is approximated by the gamma probability of the
unit interval [t, t+1), with the gamma parameters matched to the exact
mean and variance through the half-unit continuity correction:

    alpha = (mu + 1/2)**2 / sigma^2,    beta = (mu + 1/2) / sigma^2,

so alpha/beta = mu + 1/2 exactly.  Mass values come out of adjacent
log-CDF differences; each grid point costs one incomplete-gamma
evaluation because the upper CDF value of one interval is reused as the
lower value of the next.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .exact import pmf_vector
from .moments import mean_variance
from .numerics import NEG_INF, gamma_log_cdf_grid
from .params import OccupancyParams

__all__ = [
    "GammaApproxParams",
    "approx_params",
    "approx_log_pmf",
    "approx_pmf",
    "auto_method_pmf",
    "DEFAULT_SWITCH_THRESHOLD",
]

#: Space-parameter size at which auto mode switches from the exact
#: recursion to the gamma approximation.  There is no canonical value;
#: this default matches the largest block the accuracy study computes
#: exactly, and every caller can override it.
DEFAULT_SWITCH_THRESHOLD = 1000

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class GammaApproxParams:
    """Shape/rate pair of the approximating gamma law."""

    alpha: float
    beta: float


def approx_params(mean: float, variance: float) -> GammaApproxParams:
    """Moment-matched gamma parameters for a given (mean, variance).

    Zero variance has no gamma counterpart; degenerate distributions take
    the point-mass branch of :func:`approx_log_pmf` instead.
    """
    mean = float(mean)
    variance = float(variance)
    if not variance > 0.0:
        raise DomainError(
            "variance must be positive (degenerate laws use the point-mass branch)"
        )
    if not mean + 0.5 > 0.0:
        raise DomainError("mean + 1/2 must be positive")
    shifted = mean + 0.5
    return GammaApproxParams(alpha=shifted**2 / variance, beta=shifted / variance)


def _log_diff_grid(upper: np.ndarray, lower: np.ndarray) -> np.ndarray:
    """Elementwise log(exp(upper) - exp(lower)) for CDF grids.

    Monotone in exact arithmetic; where rounding or tail underflow makes
    the difference vanish, the entry is -inf rather than a noisy small
    value.
    """
    with np.errstate(invalid="ignore", divide="ignore"):
        d = lower - upper
        via_expm1 = upper + np.log(-np.expm1(d))
        via_log1p = upper + np.log1p(-np.exp(d))
        out = np.where(d > -_LN2, via_expm1, via_log1p)
        out = np.where(d < 0.0, out, NEG_INF)
    return np.where(np.isnan(out), NEG_INF, out)


def approx_log_pmf(params: OccupancyParams, tmax: int) -> np.ndarray:
    """Approximate log-pmf over t = 0..tmax.

    The exact mean and variance are computed first; zero variance emits
    the point mass at t = 0, otherwise each entry is the log-CDF
    difference of the matched gamma law over [t, t+1).
    """
    if not isinstance(tmax, int) or tmax < 0:
        raise DomainError("tmax must satisfy tmax >= 0")
    mean, variance = mean_variance(params)
    if variance == 0.0:
        out = np.full(tmax + 1, NEG_INF)
        out[0] = 0.0
        return out
    gp = approx_params(mean, variance)
    grid = gamma_log_cdf_grid(np.arange(tmax + 2, dtype=float), gp.alpha, gp.beta)
    return _log_diff_grid(grid[1:], grid[:-1])


def approx_pmf(params: OccupancyParams, tmax: int) -> np.ndarray:
    """Probability-space counterpart of :func:`approx_log_pmf`."""
    return np.exp(approx_log_pmf(params, tmax))


def auto_method_pmf(
    params: OccupancyParams,
    tmax: int,
    switch_threshold: int = DEFAULT_SWITCH_THRESHOLD,
    log_output: bool = False,
):
    """Exact pmf for m <= switch_threshold, gamma approximation otherwise.

    Returns ``(values, method)`` with method one of ``"exact"`` /
    ``"gamma"`` so callers can report which route produced the numbers.
    The boundary is inclusive on the exact side; infinite m always takes
    the approximation branch.
    """
    if not isinstance(switch_threshold, int) or switch_threshold < 1:
        raise DomainError("switch_threshold must be a positive integer")
    if not params.is_infinite and params.m <= switch_threshold:
        return pmf_vector(params, tmax, log_output=log_output), "exact"
    logs = approx_log_pmf(params, tmax)
    return (logs if log_output else np.exp(logs)), "gamma"
