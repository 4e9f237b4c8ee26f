import math

import numpy as np
import pytest

from star_ci import (BinomialSummary, InputError, ObservationRangeError, clopper_pearson,
                     empirical_bernstein_ci, hoeffding_ci, randomized_clopper_pearson, t_test_ci)
from star_ci.baselines import empirical_bernstein_radius, hoeffding_lower


def test_hoeffding_interval():
    x = np.r_[np.ones(50), np.zeros(50)]
    lo, hi = hoeffding_ci(x, 0.05)
    r = math.sqrt(math.log(40) / 200)
    assert (lo, hi) == pytest.approx((0.5 - r, 0.5 + r))
    assert r == pytest.approx(0.13578, abs=5e-5)


def test_hoeffding_half_width_as_delta_grows():
    x = np.full(50, 0.5)
    lo, hi = hoeffding_ci(x, 0.999999)
    assert (hi - lo) / 2 == pytest.approx(math.sqrt(math.log(2) / 100), rel=1e-5)


def test_hoeffding_clipped():
    assert hoeffding_ci(np.zeros(10), 0.05)[0] == 0.0
    assert hoeffding_lower(np.ones(100), 0.05) == pytest.approx(1 - math.sqrt(math.log(20) / 200))


def test_empirical_bernstein_values():
    lo, hi = empirical_bernstein_ci(np.full(100, 0.4), 0.05)
    assert (hi - lo) / 2 == pytest.approx(7 * math.log(80) / 297)
    r = empirical_bernstein_radius(100, 0.25, 0.025)
    assert r == pytest.approx(math.sqrt(0.5 * math.log(80) / 100) + 7 * math.log(80) / 297)
    first = lambda n: empirical_bernstein_radius(n, 0.2, 0.025) - 7 * math.log(80) / (3 * (n - 1))
    assert first(100) / first(200) == pytest.approx(math.sqrt(2))
    with pytest.raises(InputError):
        empirical_bernstein_ci([0.5], 0.05)


def test_t_interval():
    assert t_test_ci(np.full(20, 0.3), 0.05) == (pytest.approx(0.3), pytest.approx(0.3))
    lo, hi = t_test_ci([0.0, 1.0], 0.05)
    assert hi - 0.5 == pytest.approx(12.7062 * math.sqrt(0.5) / math.sqrt(2), abs=1e-3)
    with pytest.raises(InputError):
        t_test_ci([0.5], 0.05)


def test_clopper_pearson_values():
    assert clopper_pearson(BinomialSummary(0, 30), 0.05)[0] == 0.0
    assert clopper_pearson(BinomialSummary(30, 30), 0.05)[0] == pytest.approx(0.025 ** (1 / 30))
    lo, hi = clopper_pearson(BinomialSummary(15, 30), 0.05)
    assert lo == pytest.approx(0.3130, abs=1e-4)
    assert hi == pytest.approx(0.6870, abs=1e-4)
    assert lo == pytest.approx(1 - hi, abs=1e-12)


def test_binomial_summary():
    s = BinomialSummary.from_sample([1, 0, 1, 1])
    assert (s.k, s.n) == (3, 4)
    assert s.reflect() == BinomialSummary(1, 4)
    with pytest.raises(ObservationRangeError):
        BinomialSummary.from_sample([1, 0.5])
    with pytest.raises(InputError):
        BinomialSummary(5, 4)


def test_randomized_cp_endpoints():
    s = BinomialSummary(12, 30)
    det = clopper_pearson(s, 0.05)
    assert randomized_clopper_pearson(s, 0.05, 1.0, 1.0) == pytest.approx(det, abs=1e-10)
    lo0, hi0 = randomized_clopper_pearson(s, 0.05, 0.0, 0.0)
    assert lo0 >= det[0] and hi0 <= det[1]
