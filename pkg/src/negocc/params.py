"""Parameter triple for the negative occupancy family.

The space parameter may be the distinguished value ``INFINITE``
(``math.inf``), in which case the distribution reduces to the negative
binomial.  Everywhere in this package, probability zero is represented in
log-space as ``-inf``; no operation produces NaN.
"""

import math
from dataclasses import dataclass

from .errors import DomainError

#: Distinguished space-parameter value for an unbounded number of bins.
INFINITE = math.inf


def _validate_space(m) -> None:
    if m == INFINITE:
        return
    if not isinstance(m, (int,)) or isinstance(m, bool):
        raise DomainError("m must be a positive integer or INFINITE")
    if m < 1:
        raise DomainError("m must satisfy m >= 1")


@dataclass(frozen=True)
class OccupancyParams:
    """Parameters (m, k, theta) of a negative occupancy distribution.

    Parameters
    ----------
    m : int or INFINITE
        Space parameter (number of bins); ``INFINITE`` selects the
        negative binomial limit.
    k : int
        Occupancy parameter (number of bins to fill), ``0 < k <= m``.
    theta : float
        Probability that an allocated ball occupies its bin, in (0, 1].
        ``theta = 0`` is rejected: the hitting time would be infinite.

    The coupon-collector case is exactly ``k == m`` with finite ``m``.
    """

    m: int | float
    k: int
    theta: float

    def __post_init__(self):
        _validate_space(self.m)
        if not isinstance(self.k, int) or isinstance(self.k, bool):
            raise DomainError("k must be a positive integer")
        if self.k < 1:
            raise DomainError("k must satisfy k >= 1")
        if self.m != INFINITE and self.k > self.m:
            raise DomainError("k must satisfy 0 < k <= m")
        theta = float(self.theta)
        if not (0.0 < theta <= 1.0) or math.isnan(theta):
            raise DomainError("theta must satisfy 0 < theta <= 1")
        object.__setattr__(self, "theta", theta)

    @property
    def is_infinite(self) -> bool:
        return self.m == INFINITE

    @property
    def is_coupon_collector(self) -> bool:
        return not self.is_infinite and self.k == self.m

    def describe(self) -> dict:
        """JSON-friendly rendering of the parameter triple."""
        m = "inf" if self.is_infinite else int(self.m)
        return {"m": m, "k": self.k, "theta": self.theta}
