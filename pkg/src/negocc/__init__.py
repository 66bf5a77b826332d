"""Negative occupancy and coupon-collector distributions.

Exact log-space computation of the excess hitting-time laws of the
extended occupancy problem, their moments and generating functions, a
moment-matched gamma approximation, reproducible sampling, and an
accuracy study comparing the two computation routes.
"""

from .accuracy import (
    DEFAULT_WORK_BUDGET,
    RseReport,
    RseSummary,
    estimate_block_work,
    rse,
    rse_block,
    rse_summaries,
    truncation_point,
)
from .errors import (
    ConvergenceError,
    DegenerateMomentsError,
    DomainError,
    OracleRangeError,
    SingularityError,
    WorkBudgetError,
)
from .exact import (
    LogPmfBlock,
    cdf,
    cdf_vector,
    coupon_collector_pmf_vector,
    log_pmf_block,
    log_pmf_vector,
    negbin_log_pmf,
    pmf_vector,
    quantile,
)
from .gamma_approx import (
    DEFAULT_SWITCH_THRESHOLD,
    GammaApproxParams,
    approx_log_pmf,
    approx_params,
    approx_pmf,
    auto_method_pmf,
)
from .moments import (
    AsymptoticMoments,
    CumulantSet,
    MomentSummary,
    asymptotic_cgf,
    asymptotic_moments,
    cgf_maclaurin,
    classical_coupon_moments,
    cumulant,
    cumulant_set,
    generating_function,
    kurtosis,
    mean_variance,
    moment_summary,
    skewness,
    total_hitting_moments,
)
from .numerics import (
    gamma_log_cdf,
    gamma_log_cdf_grid,
    harmonic_number,
    harmonic_power_sum,
    log_diff_exp,
    log_falling_factorial,
    log_sum_exp,
    stirling2,
    stirling2_noncentral,
)
from .params import INFINITE, OccupancyParams
from .representations import (
    WeightVector,
    conditional_params,
    convolution_pmf,
    stirling_pmf,
    weight_vector,
    weighted_geometric_pmf,
)
from .sampler import SampleConfig, empirical_pmf, sample_geometric, sample_negocc

__version__ = "0.1.0"
