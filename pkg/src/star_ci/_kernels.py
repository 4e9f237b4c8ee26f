"""Compiled inner loops shared by the batched test engine and the interval builder.

Every routine here works in the log-wealth domain.  Bankruptcy is ``-inf`` and is
absorbing.  Rule codes must stay in sync with :class:`star_ci.strategies.Rule`.
"""

import math

import numpy as np
from numba import njit

HOEFFDING = 0
STAR_HOEFFDING = 1
BERNSTEIN = 2
STAR_BERNSTEIN = 3
BETS = 4
STAR_BETS = 5

NEG_INF = -np.inf


@njit(cache=True, nogil=True)
def second_moment(v_sum, t, n, m, clip, coef0, coefm):
    # t == 1: the additive term is +inf, so the clip wins
    if t <= 1:
        return clip
    tm1 = t - 1.0
    v = v_sum / tm1 + (coef0 + coefm * m) * n / (tm1 * tm1)
    return min(v, clip)


@njit(cache=True, nogil=True)
def bet_size(rule, log_target, log_wealth, t, n, v, sigma_sq):
    if rule == HOEFFDING:
        return math.sqrt(8.0 * log_target / n)
    if rule == BERNSTEIN:
        return math.sqrt(log_target / (n * sigma_sq))
    remaining = n - t + 1.0
    residual = log_target - log_wealth
    if residual < 0.0:
        residual = 0.0
    if rule == STAR_HOEFFDING:
        return math.sqrt(8.0 * residual / remaining)
    if rule == STAR_BERNSTEIN:
        return math.sqrt(residual / (remaining * sigma_sq))
    if rule == BETS:
        if v <= 0.0:
            return 1.0
        return min(1.0, math.sqrt(2.0 * log_target / (n * v)))
    # STAR_BETS
    if residual <= 0.0:
        return 0.0
    if v <= 0.0:
        return 1.0
    return min(1.0, math.sqrt(2.0 * residual / (remaining * v)))


@njit(cache=True, nogil=True)
def increment(linear, psi_coef, bet, d):
    if linear:
        arg = bet * d
        if 1.0 + arg <= 0.0:
            return NEG_INF
        return math.log1p(arg)
    return bet * d - psi_coef * bet * bet


@njit(cache=True, nogil=True)
def run_one(x, m, log_target, rule, linear, psi_coef, sigma_sq, clip, coef0, coefm, early_stop):
    """Play one hypothesis to the horizon.  Returns (final log-wealth, stop round or 0)."""
    n = x.shape[0]
    log_w = 0.0
    v_sum = 0.0
    for i in range(n):
        t = i + 1
        v = second_moment(v_sum, t, n, m, clip, coef0, coefm)
        bet = bet_size(rule, log_target, log_w, t, n, v, sigma_sq)
        d = x[i] - m
        log_w = log_w + increment(linear, psi_coef, bet, d)
        v_sum += d * d
        if log_w == NEG_INF:
            return log_w, 0
        if early_stop and log_w >= log_target:
            return log_w, t
    return log_w, 0


@njit(cache=True, nogil=True)
def trajectory_one(x, m, log_target, rule, linear, psi_coef, sigma_sq, clip, coef0, coefm, early_stop):
    n = x.shape[0]
    out = np.empty(n)
    log_w = 0.0
    v_sum = 0.0
    frozen = False
    for i in range(n):
        t = i + 1
        if not frozen and log_w != NEG_INF:
            v = second_moment(v_sum, t, n, m, clip, coef0, coefm)
            bet = bet_size(rule, log_target, log_w, t, n, v, sigma_sq)
            d = x[i] - m
            log_w = log_w + increment(linear, psi_coef, bet, d)
            v_sum += d * d
            if early_stop and log_w >= log_target:
                frozen = True
        out[i] = log_w
    return out


@njit(cache=True, nogil=True)
def run_many(x, ms, log_targets, rule, linear, psi_coef, sigma_sq, clip_mode_one, coef0, coefm, early_stop):
    """Final log-wealth and stop round for every hypothesis in ``ms`` on one shared sample."""
    k = ms.shape[0]
    log_w = np.empty(k)
    stops = np.zeros(k, dtype=np.int64)
    for j in range(k):
        m = ms[j]
        clip = 1.0 if clip_mode_one else m * (1.0 - m)
        log_w[j], stops[j] = run_one(
            x, m, log_targets[j], rule, linear, psi_coef, sigma_sq, clip, coef0, coefm, early_stop
        )
    return log_w, stops


@njit(cache=True, nogil=True)
def randomized_reject(log_w, log_target, randomize, u):
    if log_w >= log_target:
        return True
    if not randomize or log_w == NEG_INF:
        return False
    # W >= u / delta  <=>  log W - log(1/delta) >= log u
    if u <= 0.0:
        return True
    return log_w - log_target >= math.log(u)


@njit(cache=True, nogil=True)
def first_unrejected(x, ms, log_target, rule, linear, psi_coef, sigma_sq, clip_mode_one, coef0, coefm,
                     early_stop, randomize, uniforms):
    """Index of the first grid point (ascending) that is not rejected; len(ms) if all are."""
    k = ms.shape[0]
    for j in range(k):
        m = ms[j]
        clip = 1.0 if clip_mode_one else m * (1.0 - m)
        log_w, _ = run_one(x, m, log_target, rule, linear, psi_coef, sigma_sq, clip, coef0, coefm, early_stop)
        if not randomized_reject(log_w, log_target, randomize, uniforms[j]):
            return j
    return k
