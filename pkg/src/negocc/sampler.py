"""Random variate generation by summing the geometric increments.

A draw is the sum of k independent geometric waits, increment l having
success probability theta*(m-l+1)/m (theta itself when m is infinite,
and l shifted by the conditioning occupancy).  Each draw consumes exactly
k uniforms from a PCG64 stream, so draw i always sees uniforms
i*k..(i+1)*k-1 regardless of how the work is chunked: sequences are
bit-reproducible under any chunk size and across parallel ranges.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .params import OccupancyParams

__all__ = ["SampleConfig", "sample_geometric", "sample_negocc", "empirical_pmf"]

_DEFAULT_CHUNK = 1 << 16


@dataclass(frozen=True)
class SampleConfig:
    """A reproducible sampling request.

    ``conditional_r`` starts the increment sum at occupancy
    ``conditional_r`` instead of zero, sampling the excess wait from
    occupancy r to r + k.  Identical configs yield bit-identical draws.
    """

    params: OccupancyParams
    n: int
    seed: int
    conditional_r: int = 0

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise DomainError("n must be a positive integer")
        if not isinstance(self.conditional_r, int) or self.conditional_r < 0:
            raise DomainError("conditional_r must satisfy conditional_r >= 0")
        if (
            not self.params.is_infinite
            and self.conditional_r + self.params.k > self.params.m
        ):
            raise DomainError("conditioning requires conditional_r + k <= m")


def sample_geometric(p: float, u: float) -> int:
    """Inverse-CDF geometric draw on the failures support 0, 1, 2, ...

    floor(log(1-u) / log(1-p)) for p < 1; p = 1 is a certain success and
    returns 0.  p <= 0 would mean an infinite expected wait.
    """
    p = float(p)
    if not 0.0 < p <= 1.0:
        raise DomainError("p must satisfy 0 < p <= 1")
    u = float(u)
    if not 0.0 < u < 1.0:
        raise DomainError("u must lie strictly inside (0, 1)")
    if p == 1.0:
        return 0
    return int(math.floor(math.log1p(-u) / math.log1p(-p)))


def _increment_probs(config: SampleConfig) -> np.ndarray:
    params = config.params
    k, theta, r = params.k, params.theta, config.conditional_r
    if params.is_infinite:
        return np.full(k, theta)
    m = int(params.m)
    ls = np.arange(r + 1, r + k + 1)
    return theta * (m - ls + 1) / m


def _sample_range(seed: int, start: int, count: int, probs: np.ndarray) -> np.ndarray:
    """Draws for indices start..start+count-1 of the stream.

    PCG64 emits one 64-bit word per double, so advancing by start*k words
    positions the stream exactly at draw ``start``.
    """
    k = probs.size
    bits = np.random.PCG64(seed)
    if start:
        bits.advance(start * k)
    u = np.random.Generator(bits).random((count, k))
    draws = np.zeros(count, dtype=np.int64)
    for j, p in enumerate(probs):
        if p == 1.0:
            continue  # certain success: the uniform is consumed, wait is 0
        draws += np.floor(np.log1p(-u[:, j]) / math.log1p(-p)).astype(np.int64)
    return draws


def sample_negocc(config: SampleConfig, chunk_size: int = _DEFAULT_CHUNK) -> np.ndarray:
    """n draws from the (possibly conditional) negative occupancy law.

    Deterministic in the seed, order-stable by draw index, and invariant
    to ``chunk_size`` (which only bounds peak memory).
    """
    if not isinstance(chunk_size, int) or chunk_size < 1:
        raise DomainError("chunk_size must be a positive integer")
    probs = _increment_probs(config)
    out = np.empty(config.n, dtype=np.int64)
    for start in range(0, config.n, chunk_size):
        count = min(chunk_size, config.n - start)
        out[start : start + count] = _sample_range(config.seed, start, count, probs)
    return out


def empirical_pmf(draws, tmax: int):
    """Frequencies of t = 0..tmax plus the overflow share beyond tmax.

    Returns ``(frequencies, overflow)``; the frequencies and the overflow
    share sum to one.
    """
    draws = np.asarray(draws, dtype=np.int64)
    if draws.size == 0:
        raise DomainError("draws must be non-empty")
    if not isinstance(tmax, int) or tmax < 0:
        raise DomainError("tmax must satisfy tmax >= 0")
    counts = np.bincount(np.minimum(draws, tmax + 1), minlength=tmax + 2)
    freqs = counts[: tmax + 1] / draws.size
    overflow = counts[tmax + 1] / draws.size
    return freqs, float(overflow)
