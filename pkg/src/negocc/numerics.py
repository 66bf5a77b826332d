"""Log-space primitives and special functions.

All log-probability values here are plain floats on the extended real
line: finite, or ``-inf`` for probability zero.  No routine in this module
returns ``+inf`` or NaN for inputs inside its domain.
"""

import math
import threading

import numpy as np
from mpmath import mp, mpf

from .errors import ConvergenceError, DomainError, OracleRangeError

NEG_INF = float("-inf")

#: Largest first argument accepted by the noncentral Stirling oracle.
STIRLING_ORACLE_MAX_N = 60

#: Decimal digits used for extended-precision oracle arithmetic.
ORACLE_DPS = 50

_LN2 = math.log(2.0)


def log_sum_exp(terms) -> float:
    """log(sum(exp(t) for t in terms)), shifted by the maximum term.

    An all ``-inf`` input returns ``-inf``; an empty input is a domain
    error (the empty sum has no log).  One instance of the peak is kept
    symbolic and the rest folded in through log1p, so contributions as
    far as 700 logs below the maximum survive at full relative precision
    and ``log_diff_exp`` can recover them.
    """
    values = [float(t) for t in terms]
    if not values:
        raise DomainError("log_sum_exp requires a non-empty sequence")
    finite = [t for t in values if t != NEG_INF]
    if not finite:
        return NEG_INF
    lead = finite.index(max(finite))
    peak = finite[lead]
    rest = math.fsum(
        math.exp(t - peak) for i, t in enumerate(finite) if i != lead
    )
    return peak + math.log1p(rest)


def log_diff_exp(l1: float, l2: float) -> float:
    """log(exp(l1) - exp(l2)) for l1 >= l2, in log-space.

    Equal arguments give ``-inf``.  The difference is computed as
    ``l1 + log(1 - exp(l2 - l1))`` with the usual switch between
    ``log(-expm1(d))`` and ``log1p(-exp(d))`` so both small and large
    gaps keep full precision.
    """
    l1, l2 = float(l1), float(l2)
    if l1 < l2:
        raise DomainError("log_diff_exp requires l1 >= l2")
    if l1 == l2:
        return NEG_INF
    if l2 == NEG_INF:
        return l1
    d = l2 - l1  # < 0
    if d > -_LN2:
        return l1 + math.log(-math.expm1(d))
    return l1 + math.log1p(-math.exp(d))


def harmonic_number(m: int, order: int = 1) -> float:
    """Generalised harmonic number: sum of l**-order for l = 1..m.

    Terms are accumulated in ascending l for reproducibility; m = 0
    returns the empty sum 0.
    """
    if not isinstance(m, int) or m < 0:
        raise DomainError("m must be a non-negative integer")
    if not isinstance(order, int) or order < 1:
        raise DomainError("order must be a positive integer")
    total = 0.0
    for l in range(1, m + 1):
        total += l ** -order
    return total


def harmonic_power_sum(m, k: int, theta: float, order: int) -> float:
    """Sum of (m / (theta*l))**order over the window l = m-k+1 .. m.

    This is the cumulant building block of the distribution: the sum of
    ``order``-th powers of the inverse success probabilities of the k
    geometric increments.  Summed term-wise over the window (ascending l)
    rather than as a difference of harmonic numbers, which would cancel
    catastrophically for small k and large m.  Infinite m returns the
    limit ``k / theta**order``, approached from above: the sum is
    decreasing in m (more bins make each occupancy step easier),
    increasing in k (more positive terms), and decreasing in theta.
    """
    if not isinstance(order, int) or order < 1:
        raise DomainError("order must be a positive integer")
    if not (0.0 < theta <= 1.0):
        raise DomainError("theta must satisfy 0 < theta <= 1")
    if m == math.inf:
        if k < 1:
            raise DomainError("k must satisfy k >= 1")
        return k * theta ** -order
    if not isinstance(m, int) or m < 1:
        raise DomainError("m must be a positive integer or INFINITE")
    if not 1 <= k <= m:
        raise DomainError("k must satisfy 0 < k <= m")
    total = 0.0
    for l in range(m - k + 1, m + 1):
        total += (m / (theta * l)) ** order
    return total


def log_falling_factorial(m: int, k: int) -> float:
    """log of m*(m-1)*...*(m-k+1); the empty product (k = 0) gives 0."""
    if not isinstance(m, int) or m < 1:
        raise DomainError("m must be a positive integer")
    if not isinstance(k, int) or k < 0 or k > m:
        raise DomainError("k must satisfy 0 <= k <= m")
    total = 0.0
    for i in range(k):
        total += math.log(m - i)
    return total


def stirling2(r: int, i: int) -> int:
    """Central Stirling number of the second kind S(r, i), exactly.

    Uses the standard recurrence S(r, i) = i*S(r-1, i) + S(r-1, i-1);
    i > r counts no partitions and returns 0.  Intended for the small
    orders arising in cumulant formulas.
    """
    if not isinstance(r, int) or r < 1:
        raise DomainError("r must be a positive integer")
    if not isinstance(i, int) or i < 1:
        raise DomainError("i must be a positive integer")
    if i > r:
        return 0
    row = [1]  # S(1, j) for j = 1
    for n in range(2, r + 1):
        new = [0] * n
        for j in range(1, n + 1):
            a = j * row[j - 1] if j <= len(row) else 0
            b = row[j - 2] if j >= 2 else 0
            new[j - 1] = a + b
        row = new
    return row[i - 1]


# -- noncentral Stirling oracle ---------------------------------------------
#
# Built column by column from the base case S(n, 0, phi) = phi**n via the
# telescoping sum
#
#   S(n, j, phi) = sum_{r=0}^{n-j} (j + phi)**r * S(n-1-r, j-1, phi),
#
# in ORACLE_DPS-digit arithmetic.  The table is memoised per (column, phi)
# because callers typically sweep n at fixed column.

#: Serialises every extended-precision section: mpmath's working precision
#: is process-global state, so concurrent callers take this lock.
mp_lock = threading.RLock()

_stirling_cache: dict = {}
_stirling_lock = mp_lock


def _stirling_column(j: int, phi: float, n_max: int) -> list:
    """mpf values S(n, j, phi) for n = j..n_max (column j of the table)."""
    key = (j, phi)
    with _stirling_lock:
        col = _stirling_cache.get(key)
        if col is not None and len(col) >= n_max - j + 1:
            return col
    if j == 0:
        col = [mpf(phi) ** n for n in range(n_max + 1)]
    else:
        below = _stirling_column(j - 1, phi, n_max - 1)
        base = mpf(j) + mpf(phi)
        powers = [mpf(1)]
        for _ in range(n_max - j):
            powers.append(powers[-1] * base)
        col = []
        for n in range(j, n_max + 1):
            # telescoping sum over r = 0..n-j; below[n-1-r - (j-1)] is
            # S(n-1-r, j-1, phi)
            acc = mpf(0)
            for r in range(n - j + 1):
                acc += powers[r] * below[n - 1 - r - (j - 1)]
            col.append(acc)
    with _stirling_lock:
        kept = _stirling_cache.get(key)
        if kept is None or len(kept) < len(col):
            _stirling_cache[key] = col
            kept = col
    return kept


def _stirling2_noncentral_mp(n: int, k: int, phi: float):
    """S(n, k, phi) as an mpf; shared with the direct-evaluation oracle."""
    with mp_lock, mp.workdps(ORACLE_DPS):
        col = _stirling_column(k, float(phi), n)
    if k == 0:
        return col[n]
    return col[n - k]


def stirling2_noncentral(n: int, k: int, phi: float) -> float:
    """Noncentral Stirling number of the second kind S(n, k, phi).

    A high-precision oracle for small instances only: the telescoping
    recursion is evaluated in extended precision, and n is capped at
    ``STIRLING_ORACLE_MAX_N`` because the values grow combinatorially.
    ``phi = 0`` reduces to the central numbers.
    """
    if not isinstance(n, int) or n < 0:
        raise DomainError("n must be a non-negative integer")
    if not isinstance(k, int) or k < 0 or k > n:
        raise DomainError("k must satisfy 0 <= k <= n")
    if not (phi >= 0.0):
        raise DomainError("phi must be non-negative")
    if n > STIRLING_ORACLE_MAX_N:
        raise OracleRangeError(
            f"noncentral Stirling oracle is limited to n <= {STIRLING_ORACLE_MAX_N}"
        )
    return float(_stirling2_noncentral_mp(n, k, phi))


# -- regularized incomplete gamma, in log-space -----------------------------

_MAX_ITER = 200
_REL_TOL = 1e-15
_TINY = 1e-300


def gamma_log_cdf_grid(x, shape: float, rate: float) -> np.ndarray:
    """log of the gamma(shape, rate) CDF at each point of ``x``.

    The regularized lower incomplete gamma function P(shape, rate*x) is
    computed by its power series when ``rate*x < shape + 1`` and from the
    continued fraction of the upper function otherwise.  The series path
    assembles the log directly from its leading factor, so tiny lower
    tails come back as accurate finite logs instead of underflowing;
    on the continued-fraction side P >= 1/2, so log1p(-Q) is
    well-conditioned.  x = 0 gives ``-inf``.
    """
    if shape <= 0.0 or rate <= 0.0:
        raise DomainError("shape and rate must be positive")
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        x = x[np.newaxis]
    if np.any(x < 0.0) or not np.all(np.isfinite(x)):
        raise DomainError("x must be non-negative and finite")
    z = rate * x
    out = np.full(z.shape, NEG_INF)

    series = (z > 0.0) & (z < shape + 1.0)
    if series.any():
        zs = z[series]
        term = np.ones_like(zs)
        total = np.ones_like(zs)
        for n in range(1, _MAX_ITER + 1):
            term = term * (zs / (shape + n))
            total = total + term
            if np.all(term <= _REL_TOL * total):
                break
        else:
            raise ConvergenceError("incomplete gamma series hit the iteration cap")
        out[series] = shape * np.log(zs) - zs - math.lgamma(shape + 1.0) + np.log(total)

    frac = z >= shape + 1.0
    if frac.any():
        zf = z[frac]
        b = zf + 1.0 - shape
        c = np.full_like(zf, 1.0 / _TINY)
        d = 1.0 / b
        h = d.copy()
        done = np.zeros(zf.shape, dtype=bool)
        for i in range(1, _MAX_ITER + 1):
            an = -i * (i - shape)
            b = b + 2.0
            d = an * d + b
            d = np.where(np.abs(d) < _TINY, _TINY, d)
            c = b + an / c
            c = np.where(np.abs(c) < _TINY, _TINY, c)
            d = 1.0 / d
            delta = d * c
            h = np.where(done, h, h * delta)
            done |= np.abs(delta - 1.0) < _REL_TOL
            if done.all():
                break
        else:
            raise ConvergenceError(
                "incomplete gamma continued fraction hit the iteration cap"
            )
        log_upper = -zf + shape * np.log(zf) - math.lgamma(shape) + np.log(h)
        out[frac] = np.log1p(-np.exp(log_upper))
    return out


def gamma_log_cdf(x: float, shape: float, rate: float) -> float:
    """Scalar wrapper around :func:`gamma_log_cdf_grid`."""
    return float(gamma_log_cdf_grid(np.array([float(x)]), shape, rate)[0])
