"""Exact negative occupancy mass function via the log-space column recursion.

The mass function is built up over the occupancy parameter: column 1 is the
geometric law of the first increment, and column r+1 follows from column r
through

    L(t, r+1) = log(theta*(m-r)/m)
                + logsumexp_{j=0..t} ( j*L_r + L(t-j, r) ),

with the per-column constant L_r = log(1 - theta*(m-r)/m).  Writing
j*L_r + L(t-j, r) = t*L_r + (L(s, r) - s*L_r) with s = t - j turns the
logsumexp into a running accumulation over s <= t, so each column is one
O(T) stable scan instead of an O(T^2) convolution.  Infinite m short-cuts
to the negative binomial law.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .numerics import NEG_INF
from .params import INFINITE, OccupancyParams

__all__ = [
    "LogPmfBlock",
    "log_pmf_block",
    "log_pmf_vector",
    "pmf_vector",
    "coupon_collector_pmf_vector",
    "negbin_log_pmf",
    "cdf",
    "cdf_vector",
    "quantile",
]


@dataclass(frozen=True)
class LogPmfBlock:
    """Grid of log-probabilities L(t, r) for t = 0..tmax, r = 1..k.

    ``values[t, r-1]`` is the log mass at argument t under occupancy
    parameter r (space m, probability theta fixed).  The array is marked
    read-only; a block can be shared freely across threads.
    """

    m: int
    theta: float
    tmax: int
    values: np.ndarray

    def __post_init__(self):
        self.values.setflags(write=False)

    @property
    def k(self) -> int:
        return self.values.shape[1]

    def log_column(self, r: int) -> np.ndarray:
        """Log-pmf vector for occupancy parameter r (1-based)."""
        if not 1 <= r <= self.k:
            raise DomainError("column index must satisfy 1 <= r <= k")
        return self.values[:, r - 1]

    def column(self, r: int) -> np.ndarray:
        """Probability vector for occupancy parameter r (1-based)."""
        return np.exp(self.log_column(r))


def _geometric_log_column(theta: float, tmax: int) -> np.ndarray:
    # base case: L(t, 1) = log(theta) + t*log(1 - theta)
    if theta == 1.0:
        col = np.full(tmax + 1, NEG_INF)
        col[0] = 0.0
        return col
    ts = np.arange(tmax + 1)
    return math.log(theta) + ts * math.log1p(-theta)


def _next_log_column(col: np.ndarray, m: int, theta: float, r: int) -> np.ndarray:
    """Column for occupancy r+1 from the column for occupancy r."""
    coeff = theta * (m - r) / m
    decay = 1.0 - coeff
    if decay == 0.0:
        # L_r = -inf: the logsumexp collapses to its j = 0 term.  Cannot
        # occur for theta <= 1 and r >= 1, but keeps the operation total.
        return math.log(coeff) + col
    log_decay = math.log(decay)
    ts = np.arange(col.size)
    running = np.logaddexp.accumulate(col - ts * log_decay)
    out = math.log(coeff) + ts * log_decay + running
    return np.minimum(out, 0.0)  # rounding guard: log-probabilities


def log_pmf_block(m: int, theta: float, k: int, tmax: int) -> LogPmfBlock:
    """Full (tmax+1) x k block of log-probabilities.

    Column r of the result is the exact log-pmf for parameters
    (m, r, theta) over arguments t = 0..tmax; the intermediate columns are
    retained because block consumers (parameter studies, block CLI output)
    need every occupancy value, not just the last.
    """
    params = OccupancyParams(m, k, theta)
    if params.is_infinite:
        raise DomainError("log_pmf_block requires finite m")
    if not isinstance(tmax, int) or tmax < 0:
        raise DomainError("tmax must satisfy tmax >= 0")
    values = np.empty((tmax + 1, k))
    col = _geometric_log_column(params.theta, tmax)
    values[:, 0] = col
    for r in range(1, k):
        col = _next_log_column(col, m, params.theta, r)
        values[:, r] = col
    return LogPmfBlock(m=m, theta=params.theta, tmax=tmax, values=values)


def _log_pmf_final_column(m: int, theta: float, k: int, tmax: int) -> np.ndarray:
    # low-memory mode: single-k queries never materialise the block
    col = _geometric_log_column(theta, tmax)
    for r in range(1, k):
        col = _next_log_column(col, m, theta, r)
    return col


def negbin_log_pmf(k: int, theta: float, t: int) -> float:
    """Negative binomial log mass (the m = INFINITE law): the k-fold
    convolution of Geom(theta) on the failures support."""
    if not isinstance(k, int) or k < 1:
        raise DomainError("k must satisfy k >= 1")
    if not (0.0 < theta <= 1.0):
        raise DomainError("theta must satisfy 0 < theta <= 1")
    if not isinstance(t, int) or t < 0:
        raise DomainError("t must satisfy t >= 0")
    if theta == 1.0:
        return 0.0 if t == 0 else NEG_INF
    return (
        math.lgamma(k + t)
        - math.lgamma(t + 1)
        - math.lgamma(k)
        + k * math.log(theta)
        + t * math.log1p(-theta)
    )


def log_pmf_vector(params: OccupancyParams, tmax: int) -> np.ndarray:
    """Log-pmf over t = 0..tmax for one parameter triple."""
    if not isinstance(tmax, int) or tmax < 0:
        raise DomainError("tmax must satisfy tmax >= 0")
    if params.is_infinite:
        return np.array(
            [negbin_log_pmf(params.k, params.theta, t) for t in range(tmax + 1)]
        )
    return _log_pmf_final_column(int(params.m), params.theta, params.k, tmax)


def pmf_vector(params: OccupancyParams, tmax: int, log_output: bool = False) -> np.ndarray:
    """Pmf (or log-pmf) over t = 0..tmax."""
    logs = log_pmf_vector(params, tmax)
    return logs if log_output else np.exp(logs)


def coupon_collector_pmf_vector(
    m: int, theta: float, tmax: int, log_output: bool = False
) -> np.ndarray:
    """Pmf of the coupon-collector distribution, the k = m case.

    Infinite m is rejected: with unboundedly many bins a full collection
    is never completed, so the law degenerates.
    """
    if m == INFINITE:
        raise DomainError("the coupon-collector distribution requires finite m")
    if not isinstance(m, int) or m < 1:
        raise DomainError("m must be a positive integer")
    return pmf_vector(OccupancyParams(m, m, theta), tmax, log_output=log_output)


def cdf_vector(params: OccupancyParams, tmax: int) -> np.ndarray:
    """CDF over t = 0..tmax, accumulated in log-space then exponentiated."""
    logs = log_pmf_vector(params, tmax)
    return np.clip(np.exp(np.logaddexp.accumulate(logs)), 0.0, 1.0)


def cdf(params: OccupancyParams, t: int) -> float:
    """P(T <= t); non-decreasing in t and clamped to [0, 1]."""
    if not isinstance(t, int) or t < 0:
        raise DomainError("t must satisfy t >= 0")
    return float(cdf_vector(params, t)[t])


def quantile(params: OccupancyParams, p: float) -> int:
    """Smallest t with cdf(t) >= p.

    p = 1 is rejected because the support is unbounded.  Blocks of
    doubling length are computed until the threshold is crossed, starting
    from the standard truncation point.
    """
    p = float(p)
    if not (0.0 <= p < 1.0):
        raise DomainError("p must satisfy 0 <= p < 1")
    from .accuracy import truncation_point

    tmax = max(truncation_point(params), 1)
    while True:
        probs = cdf_vector(params, tmax)
        hits = np.nonzero(probs >= p)[0]
        if hits.size:
            return int(hits[0])
        tmax *= 2
