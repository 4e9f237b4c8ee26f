"""Batched evaluation of many hypotheses on one sample through the compiled loops.

These functions compute exactly what :func:`star_ci.process.run_test` computes, one
hypothesis at a time, but without Python overhead per round.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .process import _as_sample
from .strategies import StrategyConfig


def _log_targets(delta, size: int) -> np.ndarray:
    delta = np.broadcast_to(np.asarray(delta, dtype=float), (size,))
    if np.any((delta <= 0.0) | (delta >= 1.0)):
        raise ValueError("delta must lie in (0, 1)")
    return np.log(1.0 / delta)


def final_log_wealths(config: StrategyConfig, sample: Sequence[float], ms, delta=None):
    """Final log-wealth and stop round (0 = never stopped) for every hypothesis in ``ms``.

    ``delta`` may be a scalar or one level per hypothesis; it defaults to ``config.delta``.
    """
    x = _as_sample(sample)
    ms = np.atleast_1d(np.asarray(ms, dtype=float))
    if np.any((ms < 0.0) | (ms > 1.0)):
        raise ValueError("hypothesised means must lie in [0, 1]")
    targets = _log_targets(config.delta if delta is None else delta, ms.size)
    return _kernels.run_many(x, ms, targets, *config.kernel_args())


def rejections(config: StrategyConfig, sample, ms, delta=None) -> np.ndarray:
    """Boolean rejection decision (no randomization) for every hypothesis in ``ms``."""
    ms = np.atleast_1d(np.asarray(ms, dtype=float))
    targets = _log_targets(config.delta if delta is None else delta, ms.size)
    log_w, _ = final_log_wealths(config, sample, ms, delta)
    return log_w >= targets


def log_wealth_trajectory(config: StrategyConfig, sample, m: float, delta: Optional[float] = None):
    x = _as_sample(sample)
    delta = config.delta if delta is None else delta
    return _kernels.trajectory_one(x, float(m), math.log(1.0 / delta), *_trajectory_args(config, m))


def _trajectory_args(config: StrategyConfig, m: float) -> tuple:
    rule, linear, psi_coef, sigma_sq, clip_one, coef0, coefm, early_stop = config.kernel_args()
    clip = 1.0 if clip_one else m * (1.0 - m)
    return rule, linear, psi_coef, sigma_sq, clip, coef0, coefm, early_stop
