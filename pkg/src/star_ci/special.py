"""Special functions used by the closed-form baselines.

Binomial tails are summed in log space; the regularized incomplete beta function uses
the modified Lentz evaluation of its continued fraction.  Quantiles and confidence
limits are obtained by plain bisection, which keeps the results reproducible bit for bit.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

ROOT_TOL = 1e-10
_CF_EPS = 1e-15
_CF_TINY = 1e-300
_CF_MAX_ITER = 200_000


def bisect_increasing(f, target: float, lo: float = 0.0, hi: float = 1.0, tol: float = ROOT_TOL) -> float:
    """Root of ``f(x) = target`` for nondecreasing ``f`` on ``[lo, hi]``.

    Returns the midpoint of the final bracket ``[a, b]`` with ``f(a) < target <= f(b)``.
    Endpoints stay dyadic when ``lo, hi`` are, so ``1 - (1 - x) == x`` holds exactly.
    """
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@lru_cache(maxsize=256)
def _log_choose(n: int) -> np.ndarray:
    lg = math.lgamma
    base = lg(n + 1)
    return np.array([base - lg(k + 1) - lg(n - k + 1) for k in range(n + 1)])


def _logsumexp(a: np.ndarray) -> float:
    if a.size == 0:
        return -math.inf
    top = a.max()
    if top == -math.inf:
        return -math.inf
    return float(top + math.log(np.exp(a - top).sum()))


def binom_log_pmf(n: int, p: float) -> np.ndarray:
    """``log P(Bin(n, p) = k)`` for ``k = 0..n``."""
    ks = np.arange(n + 1)
    if p <= 0.0:
        out = np.full(n + 1, -math.inf)
        out[0] = 0.0
        return out
    if p >= 1.0:
        out = np.full(n + 1, -math.inf)
        out[n] = 0.0
        return out
    return _log_choose(n) + ks * math.log(p) + (n - ks) * math.log1p(-p)


def binom_pmf(k: int, n: int, p: float) -> float:
    if not 0 <= k <= n:
        return 0.0
    return math.exp(binom_log_pmf(n, p)[k])


def binom_sf(k: int, n: int, p: float) -> float:
    """``P(Bin(n, p) >= k)``."""
    if k <= 0:
        return 1.0
    if k > n:
        return 0.0
    return min(1.0, math.exp(_logsumexp(binom_log_pmf(n, p)[k:])))


def binom_cdf(k: int, n: int, p: float) -> float:
    """``P(Bin(n, p) <= k)``."""
    if k < 0:
        return 0.0
    if k >= n:
        return 1.0
    return min(1.0, math.exp(_logsumexp(binom_log_pmf(n, p)[: k + 1])))


def _beta_cf(a: float, b: float, x: float) -> float:
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def betainc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function ``I_x(a, b)``."""
    if a <= 0.0 or b <= 0.0:
        raise ValueError("betainc needs a, b > 0")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * math.log(x) + b * math.log1p(-x))
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(log_front) * _beta_cf(a, b, x) / a
    return 1.0 - math.exp(log_front) * _beta_cf(b, a, 1.0 - x) / b


def student_t_cdf(t: float, df: float) -> float:
    if df <= 0:
        raise ValueError("degrees of freedom must be positive")
    if t == 0.0:
        return 0.5
    tail = 0.5 * betainc(0.5 * df, 0.5, df / (df + t * t))
    return 1.0 - tail if t > 0 else tail


def student_t_quantile(p: float, df: float, tol: float = ROOT_TOL) -> float:
    """Inverse of :func:`student_t_cdf` by bisection to absolute tolerance ``tol``."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    if p == 0.5:
        return 0.0
    if p < 0.5:
        return -student_t_quantile(1.0 - p, df, tol)
    hi = 1.0
    while student_t_cdf(hi, df) < p:
        hi *= 2.0
    return bisect_increasing(lambda t: student_t_cdf(t, df), p, 0.0, hi, tol)


def clopper_pearson_lower(k: int, n: int, delta_side: float) -> float:
    """Largest ``p`` rejected by the one-sided exact binomial test: ``P_p(Bin >= k) = delta_side``."""
    if k <= 0:
        return 0.0
    return bisect_increasing(lambda p: binom_sf(k, n, p), delta_side)


def randomized_clopper_pearson_lower(k: int, n: int, delta_side: float, u: float) -> float:
    """Root of ``P_p(Bin > k) + u P_p(Bin = k) = delta_side``.

    0 when the left side already reaches ``delta_side`` at ``p = 0``; 1 when it never does.
    """
    def f(p):
        return binom_sf(k + 1, n, p) + u * binom_pmf(k, n, p)

    if f(0.0) >= delta_side:
        return 0.0
    if f(1.0) < delta_side:
        return 1.0
    return bisect_increasing(f, delta_side)
