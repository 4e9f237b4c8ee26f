"""Closed-form and binomial baseline confidence intervals.

Each method is written as a one-sided lower bound at level ``delta_side``; the
two-sided interval spends ``delta_total / 2`` per side and gets the upper bound by
reflecting the data (``x -> 1 - x``, or ``k -> n - k`` for binomial counts).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InputError, ObservationRangeError
from .process import _as_sample
from .special import clopper_pearson_lower, randomized_clopper_pearson_lower, student_t_quantile


@dataclass(frozen=True)
class BinomialSummary:
    k: int
    n: int

    def __post_init__(self):
        if self.n < 1 or not 0 <= self.k <= self.n:
            raise InputError(f"need 0 <= k <= n and n >= 1, got k={self.k}, n={self.n}")

    @classmethod
    def from_sample(cls, sample: Sequence[float]) -> "BinomialSummary":
        x = _as_sample(sample)
        if not np.all((x == 0.0) | (x == 1.0)):
            raise ObservationRangeError("binomial methods (cp, cp-rand) need observations in {0, 1}")
        return cls(int(x.sum()), int(x.size))

    def reflect(self) -> "BinomialSummary":
        return BinomialSummary(self.n - self.k, self.n)


def _clip01(v: float) -> float:
    return min(1.0, max(0.0, v))


def _two_sided(lower_fn, sample, delta_total: float):
    x = _as_sample(sample)
    half = delta_total / 2.0
    return lower_fn(x, half), 1.0 - lower_fn(1.0 - x, half)


def hoeffding_lower(sample, delta_side: float) -> float:
    x = _as_sample(sample)
    return _clip01(x.mean() - math.sqrt(math.log(1.0 / delta_side) / (2.0 * x.size)))


def hoeffding_ci(sample, delta_total: float) -> tuple[float, float]:
    """``mean -/+ sqrt(log(2/delta) / (2n))`` clipped to [0, 1]."""
    return _two_sided(hoeffding_lower, sample, delta_total)


def empirical_bernstein_radius(n: int, var: float, delta_side: float) -> float:
    """Maurer-Pontil radius with a union over the two estimates: log(2/delta_side)."""
    log_term = math.log(2.0 / delta_side)
    return math.sqrt(2.0 * var * log_term / n) + 7.0 * log_term / (3.0 * (n - 1))


def empirical_bernstein_lower(sample, delta_side: float) -> float:
    x = _as_sample(sample)
    if x.size < 2:
        raise InputError("empirical Bernstein needs at least two observations")
    return _clip01(x.mean() - empirical_bernstein_radius(x.size, x.var(ddof=1), delta_side))


def empirical_bernstein_ci(sample, delta_total: float) -> tuple[float, float]:
    return _two_sided(empirical_bernstein_lower, sample, delta_total)


def t_test_lower(sample, delta_side: float) -> float:
    x = _as_sample(sample)
    if x.size < 2:
        raise InputError("the t interval needs at least two observations")
    s = x.std(ddof=1)
    if s == 0.0:
        return float(x.mean())
    q = student_t_quantile(1.0 - delta_side, x.size - 1)
    return float(x.mean() - q * s / math.sqrt(x.size))


def t_test_ci(sample, delta_total: float) -> tuple[float, float]:
    """Student-t interval; no coverage guarantee for bounded data and not clipped."""
    return _two_sided(t_test_lower, sample, delta_total)


def clopper_pearson(summary: BinomialSummary, delta_total: float) -> tuple[float, float]:
    half = delta_total / 2.0
    lower = clopper_pearson_lower(summary.k, summary.n, half)
    upper = 1.0 - clopper_pearson_lower(summary.n - summary.k, summary.n, half)
    return lower, upper


def randomized_clopper_pearson(summary: BinomialSummary, delta_total: float,
                               u_low: float, u_high: float) -> tuple[float, float]:
    half = delta_total / 2.0
    lower = randomized_clopper_pearson_lower(summary.k, summary.n, half, u_low)
    upper = 1.0 - randomized_clopper_pearson_lower(summary.n - summary.k, summary.n, half, u_high)
    return lower, upper
