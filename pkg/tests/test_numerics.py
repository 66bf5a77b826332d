"""Log-space primitives and special functions."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from negocc import (
    DomainError,
    OracleRangeError,
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

NEG_INF = float("-inf")

log_domain = st.floats(min_value=-700.0, max_value=0.0, allow_nan=False)


class TestLogSumExp:
    def test_two_unit_terms(self):
        assert log_sum_exp([0.0, 0.0]) == pytest.approx(math.log(2.0), abs=1e-15)

    def test_neg_inf_is_identity(self):
        for x in (-3.5, 0.0, -700.0):
            assert log_sum_exp([NEG_INF, x]) == x

    def test_probability_sum(self):
        got = log_sum_exp([math.log(0.2), math.log(0.3)])
        assert got == pytest.approx(math.log(0.5), abs=1e-15)

    def test_all_neg_inf(self):
        assert log_sum_exp([NEG_INF, NEG_INF]) == NEG_INF

    def test_empty_sequence_rejected(self):
        with pytest.raises(DomainError):
            log_sum_exp([])

    @given(st.lists(log_domain, min_size=1, max_size=8))
    def test_permutation_invariant_and_padding_exact(self, xs):
        base = log_sum_exp(xs)
        assert log_sum_exp(list(reversed(xs))) == pytest.approx(base, abs=1e-13)
        assert log_sum_exp(xs + [NEG_INF]) == base
        assert not math.isnan(base)
        assert base <= math.log(len(xs)) + 1e-12  # inputs are log-probabilities


class TestLogDiffExp:
    def test_two_minus_one(self):
        assert log_diff_exp(math.log(2.0), 0.0) == pytest.approx(0.0, abs=1e-15)

    def test_equal_arguments(self):
        assert log_diff_exp(-1.3, -1.3) == NEG_INF
        assert log_diff_exp(NEG_INF, NEG_INF) == NEG_INF

    def test_probability_difference(self):
        got = log_diff_exp(0.0, math.log(0.75))
        assert got == pytest.approx(math.log(0.25), abs=1e-15)

    def test_reversed_arguments_rejected(self):
        with pytest.raises(DomainError):
            log_diff_exp(-2.0, -1.0)

    @given(log_domain, log_domain)
    @settings(max_examples=300)
    def test_sum_then_diff_roundtrip(self, a, b):
        # exp(logdiffexp(logsumexp([a, b]), b)) recovers exp(a).  Once
        # exp(a) drops below the ulp resolution of the stored sum
        # (~eps * exp(b) * (1 + |b|)) the information cannot survive any
        # binary64 logsumexp, so that floor enters as an absolute term.
        total = log_sum_exp([a, b])
        back = log_diff_exp(total, b)
        floor = 2.0**-52 * math.exp(b) * (4.0 + 2.0 * abs(b))
        np.testing.assert_allclose(
            math.exp(back), math.exp(a), rtol=1e-12, atol=floor
        )
        assert not math.isnan(back)


class TestHarmonicNumbers:
    def test_small_values(self):
        assert harmonic_number(3, 1) == pytest.approx(11.0 / 6.0, rel=1e-15)
        assert harmonic_number(3, 2) == pytest.approx(49.0 / 36.0, rel=1e-15)

    def test_empty_sum(self):
        assert harmonic_number(0, 1) == 0.0
        assert harmonic_number(0, 7) == 0.0

    def test_monotone_in_m_and_order(self):
        for m in range(2, 30):
            assert harmonic_number(m, 1) > harmonic_number(m - 1, 1)
            for r in range(1, 4):
                assert harmonic_number(m, r) > harmonic_number(m, r + 1)

    def test_domain(self):
        with pytest.raises(DomainError):
            harmonic_number(-1, 1)
        with pytest.raises(DomainError):
            harmonic_number(3, 0)


class TestHarmonicPowerSum:
    def test_small_values(self):
        assert harmonic_power_sum(3, 2, 1.0, 1) == pytest.approx(2.5, rel=1e-15)
        assert harmonic_power_sum(3, 2, 1.0, 2) == pytest.approx(3.25, rel=1e-15)

    def test_infinite_limit(self):
        # limit k / theta**order
        assert harmonic_power_sum(math.inf, 2, 0.5, 1) == pytest.approx(4.0)
        assert harmonic_power_sum(math.inf, 3, 0.25, 2) == pytest.approx(48.0)

    def test_matches_harmonic_difference(self):
        for (m, k, theta, order) in [(10, 4, 0.6, 1), (25, 25, 1.0, 2), (7, 3, 0.3, 3)]:
            ref = (m / theta) ** order * (
                harmonic_number(m, order) - harmonic_number(m - k, order)
            )
            got = harmonic_power_sum(m, k, theta, order)
            np.testing.assert_allclose(got, ref, rtol=1e-12)

    def test_monotone_in_parameters(self):
        # decreasing in m toward the k/theta**order limit, increasing in
        # k, decreasing in theta
        grid = [(8, 4, 0.5), (20, 10, 0.8), (15, 3, 1.0)]
        for order in (1, 2, 3):
            for m, k, theta in grid:
                here = harmonic_power_sum(m, k, theta, order)
                assert harmonic_power_sum(m + 1, k, theta, order) < here
                assert harmonic_power_sum(m, k + 1, theta, order) > here
                assert harmonic_power_sum(m, k, theta - 0.1, order) > here
                assert here > harmonic_power_sum(math.inf, k, theta, order)

    def test_limit_approached_from_above(self):
        limit = harmonic_power_sum(math.inf, 5, 0.5, 2)
        values = [harmonic_power_sum(10**j, 5, 0.5, 2) for j in (2, 3, 4, 5)]
        assert all(a > b for a, b in zip(values, values[1:]))
        assert all(v > limit for v in values)
        np.testing.assert_allclose(values[-1], limit, rtol=1e-3)

    def test_domain(self):
        with pytest.raises(DomainError):
            harmonic_power_sum(3, 4, 1.0, 1)


class TestLogFallingFactorial:
    def test_values(self):
        assert log_falling_factorial(3, 2) == pytest.approx(math.log(6.0), rel=1e-15)
        assert log_falling_factorial(5, 5) == pytest.approx(math.log(120.0), rel=1e-15)

    def test_empty_product(self):
        assert log_falling_factorial(7, 0) == 0.0

    def test_domain(self):
        with pytest.raises(DomainError):
            log_falling_factorial(3, 4)


def _stirling2_exact(n: int, k: int) -> int:
    # alternating-sum closed form, evaluated in exact integer arithmetic
    total = Fraction(0)
    for i in range(k + 1):
        total += Fraction((-1) ** (k - i) * math.comb(k, i) * i**n)
    total /= Fraction(math.factorial(k))
    assert total.denominator == 1
    return int(total)


def _stirling2_noncentral_exact(n: int, k: int, phi: Fraction) -> Fraction:
    total = Fraction(0)
    for i in range(k + 1):
        total += Fraction((-1) ** (k - i) * math.comb(k, i)) * (i + phi) ** n
    return total / math.factorial(k)


class TestStirlingCentral:
    def test_known_values(self):
        assert stirling2(3, 2) == 3
        assert stirling2(4, 2) == 7
        for r in range(1, 10):
            assert stirling2(r, 1) == 1

    def test_above_diagonal_is_zero(self):
        assert stirling2(3, 5) == 0

    def test_against_alternating_sum(self):
        for n in range(1, 13):
            for k in range(1, n + 1):
                assert stirling2(n, k) == _stirling2_exact(n, k)


class TestStirlingNoncentral:
    def test_base_case_power(self):
        assert stirling2_noncentral(2, 0, 3.0) == pytest.approx(9.0, rel=1e-14)
        assert stirling2_noncentral(0, 0, 0.0) == 1.0

    def test_one_telescoping_step(self):
        # phi + (1 + phi) at phi = 1
        assert stirling2_noncentral(2, 1, 1.0) == pytest.approx(3.0, rel=1e-14)

    def test_reduces_to_central_at_zero(self):
        for n in range(1, 13):
            for k in range(1, n + 1):
                got = stirling2_noncentral(n, k, 0.0)
                assert got == pytest.approx(_stirling2_exact(n, k), rel=1e-13)

    @pytest.mark.parametrize("phi", [Fraction(3, 2), Fraction(0), Fraction(9, 4)])
    def test_against_exact_rational_sum(self, phi):
        for n in range(0, 21):
            for k in range(0, n + 1):
                ref = float(_stirling2_noncentral_exact(n, k, phi))
                got = stirling2_noncentral(n, k, float(phi))
                np.testing.assert_allclose(got, ref, rtol=1e-12, atol=0.0)

    def test_oracle_range_is_enforced(self):
        with pytest.raises(OracleRangeError):
            stirling2_noncentral(61, 5, 1.0)

    def test_domain(self):
        with pytest.raises(DomainError):
            stirling2_noncentral(3, 4, 1.0)


def _erlang_cdf_highprec(x: float, k: int, rate: float) -> float:
    from mpmath import mp, mpf

    with mp.workdps(50):
        lam = mpf(rate) * mpf(x)
        tail = sum(lam**j / mp.factorial(j) for j in range(k))
        return float(1 - mp.e ** (-lam) * tail)


class TestGammaLogCdf:
    def test_exponential_special_case(self):
        got = gamma_log_cdf(1.0, 1.0, 1.0)
        assert got == pytest.approx(math.log(-math.expm1(-1.0)), rel=1e-14)

    def test_zero_argument(self):
        assert gamma_log_cdf(0.0, 2.5, 0.7) == NEG_INF

    def test_erlang_shape_two(self):
        got = gamma_log_cdf(2.0, 2.0, 1.0)
        assert got == pytest.approx(math.log(1.0 - 3.0 * math.exp(-2.0)), rel=1e-13)

    @pytest.mark.parametrize("shape", [1, 2, 3, 4, 5])
    def test_erlang_closed_forms(self, shape):
        for rate in (0.5, 1.0, 2.0):
            for x in (0.05, 0.3, 1.0, 2.7, 6.0, 15.0, 40.0):
                ref = _erlang_cdf_highprec(x, shape, rate)
                got = math.exp(gamma_log_cdf(x, float(shape), rate))
                np.testing.assert_allclose(got, ref, rtol=1e-10)

    def test_monotone_and_bounded(self):
        for shape in (0.4, 3.0, 17.3, 80.0):
            xs = np.linspace(0.0, 6.0 * (shape + 1.0), 400)
            logs = gamma_log_cdf_grid(xs, shape, 1.0)
            probs = np.exp(logs)
            assert np.all(np.diff(logs) >= -1e-13)
            assert np.all((probs >= 0.0) & (probs <= 1.0))
            assert not np.any(np.isnan(logs))

    def test_deep_left_tail_stays_finite(self):
        got = gamma_log_cdf(1e-3, 20.0, 1.0)
        assert math.isfinite(got) and got < -100.0

    def test_matches_scipy(self):
        scipy_stats = pytest.importorskip("scipy.stats")
        rng = np.random.default_rng(1)
        for shape in (0.7, 4.0, 33.0):
            xs = rng.uniform(0.0, 4.0 * shape, 50)
            ref = scipy_stats.gamma.logcdf(xs, a=shape, scale=2.0)
            got = gamma_log_cdf_grid(xs, shape, 0.5)
            np.testing.assert_allclose(got, ref, rtol=1e-11, atol=1e-13)

    def test_domain(self):
        with pytest.raises(DomainError):
            gamma_log_cdf(-1.0, 1.0, 1.0)
        with pytest.raises(DomainError):
            gamma_log_cdf(1.0, 0.0, 1.0)
        with pytest.raises(DomainError):
            gamma_log_cdf(1.0, 1.0, -2.0)
