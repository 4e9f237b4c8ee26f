import math

import numpy as np
import pytest
from scipy import stats, special as sps

from star_ci.special import (betainc, binom_cdf, binom_pmf, binom_sf, bisect_increasing,
                             clopper_pearson_lower, randomized_clopper_pearson_lower,
                             student_t_cdf, student_t_quantile)


@pytest.mark.parametrize("n,p", [(1, 0.3), (30, 0.5), (30, 0.97), (1000, 0.9), (5000, 0.001)])
def test_binomial_against_scipy(n, p):
    for k in sorted({0, 1, n // 3, n // 2, n - 1, n}):
        assert binom_pmf(k, n, p) == pytest.approx(stats.binom.pmf(k, n, p), rel=1e-9, abs=1e-300)
        assert binom_sf(k, n, p) == pytest.approx(stats.binom.sf(k - 1, n, p), rel=1e-9, abs=1e-300)
        assert binom_cdf(k, n, p) == pytest.approx(stats.binom.cdf(k, n, p), rel=1e-9, abs=1e-300)


@pytest.mark.parametrize("a,b", [(0.5, 0.5), (2, 5), (15, 16), (0.5, 500), (300, 2)])
def test_betainc_against_scipy(a, b):
    for x in (1e-6, 0.01, 0.3, 0.5, 0.9, 0.999999):
        assert betainc(a, b, x) == pytest.approx(sps.betainc(a, b, x), rel=1e-9, abs=1e-14)


@pytest.mark.parametrize("df", [1, 2, 5, 29, 255, 10_000, 1_000_000])
def test_t_against_scipy(df):
    for q in (0.6, 0.9, 0.975, 0.995):
        assert student_t_quantile(q, df) == pytest.approx(stats.t.ppf(q, df), abs=1e-8)
    for t in (-3.0, 0.0, 1.2, 8.0):
        assert student_t_cdf(t, df) == pytest.approx(stats.t.cdf(t, df), abs=1e-9)


def test_t_golden_values():
    assert student_t_quantile(0.975, 1) == pytest.approx(12.7062, abs=1e-3)
    assert student_t_quantile(0.975, 10 ** 7) == pytest.approx(1.95996, abs=1e-5)


def test_bisect_increasing():
    assert bisect_increasing(lambda v: v * v, 0.25) == pytest.approx(0.5, abs=1e-10)


@pytest.mark.parametrize("k,n", [(0, 10), (1, 10), (15, 30), (30, 30), (870, 1000), (3, 7)])
def test_clopper_pearson_against_beta_quantile(k, n):
    expected = 0.0 if k == 0 else stats.beta.ppf(0.025, k, n - k + 1)
    assert clopper_pearson_lower(k, n, 0.025) == pytest.approx(expected, abs=1e-9)


def test_clopper_pearson_all_successes():
    assert clopper_pearson_lower(30, 30, 0.025) == pytest.approx(0.025 ** (1 / 30), abs=1e-8)


def test_randomized_cp_endpoints():
    k, n, d = 11, 30, 0.025
    deterministic = clopper_pearson_lower(k, n, d)
    assert randomized_clopper_pearson_lower(k, n, d, 1.0) == pytest.approx(deterministic, abs=1e-10)
    at_zero = randomized_clopper_pearson_lower(k, n, d, 0.0)
    assert at_zero == pytest.approx(stats.beta.ppf(d, k + 1, n - k), abs=1e-9)
    assert at_zero >= deterministic
    mids = [randomized_clopper_pearson_lower(k, n, d, u) for u in np.linspace(0, 1, 11)]
    assert all(a >= b - 1e-12 for a, b in zip(mids, mids[1:]))


def test_randomized_cp_root_equation():
    k, n, d, u = 9, 25, 0.025, 0.37
    p = randomized_clopper_pearson_lower(k, n, d, u)
    assert stats.binom.sf(k, n, p) + u * stats.binom.pmf(k, n, p) == pytest.approx(d, abs=1e-8)
