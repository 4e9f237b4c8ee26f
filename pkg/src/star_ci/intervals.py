"""Confidence intervals from betting strategies by testing a grid of candidate means.

For the lower bound every grid point ``m_i = i/g`` is tested in ascending order and the
bound is the last point of the leading run of rejections.  All strategies bet on the
mean being *above* ``m``, so the process at ``m_i`` is a supermartingale whenever the
true mean is at most ``m_i``; a rejection at ``m_i`` therefore validly excludes every
smaller mean.  The upper bound is the lower bound of the reflected sample ``1 - x``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .errors import ConfigurationError
from .process import _as_sample
from .rng import substream
from .strategies import StrategyConfig


@dataclass(frozen=True)
class GridSpec:
    g: int = 1000

    def __post_init__(self):
        if self.g < 2:
            raise ConfigurationError(f"grid needs at least 2 cells, got g={self.g}")

    @property
    def points(self) -> np.ndarray:
        return np.arange(self.g + 1) / self.g

    def point(self, i: int) -> float:
        return i / self.g

    def snap(self, value: float) -> float:
        return round(value * self.g) / self.g


@dataclass(frozen=True)
class IntervalResult:
    lower: float
    upper: float
    delta_total: float
    frontier_lower: int
    frontier_upper: int
    method: str
    seed: int
    degenerate: bool = False

    @property
    def width(self) -> float:
        return self.upper - self.lower


def reflect(sample: Sequence[float]) -> np.ndarray:
    return 1.0 - _as_sample(sample)


def _side_uniforms(grid: GridSpec, seed: int, side: str, randomize: bool) -> np.ndarray:
    # one uniform shared by every grid point of a side: independent draws per point would
    # make a long run of randomized rejections exponentially unlikely and the bound conservative
    if not randomize:
        return np.ones(grid.g + 1)
    u = substream(seed, "last-round", side).random()
    return np.full(grid.g + 1, u)


def lower_frontier(strategy: StrategyConfig, sample, delta_side: float,
                   grid: GridSpec = GridSpec(), seed: int = 0, side: str = "lower") -> int:
    """Index of the last grid point in the leading run of rejections (-1 if ``m_0`` survives).

    ``side`` labels the randomization substream so the two sides of an interval use
    independent uniforms.
    """
    if not 0.0 < delta_side < 1.0:
        raise ConfigurationError(f"delta_side must lie in (0, 1), got {delta_side}")
    x = _as_sample(sample)
    uniforms = _side_uniforms(grid, seed, side, strategy.randomize_last)
    j = _kernels.first_unrejected(
        x, grid.points, math.log(1.0 / delta_side), *strategy.kernel_args(),
        bool(strategy.randomize_last), uniforms,
    )
    return int(j) - 1


def lower_confidence_bound(strategy: StrategyConfig, sample, delta_side: float,
                           grid: GridSpec = GridSpec(), seed: int = 0) -> float:
    """Largest grid point ``m_i`` such that ``H0(m_j)`` is rejected for every ``j <= i``; 0 if none."""
    i = lower_frontier(strategy, sample, delta_side, grid, seed, "lower")
    return grid.point(max(i, 0))


def upper_confidence_bound(strategy: StrategyConfig, sample, delta_side: float,
                           grid: GridSpec = GridSpec(), seed: int = 0) -> float:
    i = lower_frontier(strategy, reflect(sample), delta_side, grid, seed, "upper")
    return grid.point(grid.g - max(i, 0))


def confidence_interval(strategy: StrategyConfig, sample, delta_total: float,
                        grid: GridSpec = GridSpec(), seed: int = 0,
                        method: Optional[str] = None) -> IntervalResult:
    """Two-sided interval spending ``delta_total / 2`` on each side.

    If the two one-sided bounds cross (only possible through randomization or when every
    grid point on a side is rejected) both collapse to their grid-snapped midpoint and the
    result is flagged ``degenerate``.
    """
    if not 0.0 < delta_total < 1.0:
        raise ConfigurationError(f"delta_total must lie in (0, 1), got {delta_total}")
    x = _as_sample(sample)
    half = delta_total / 2.0
    i_low = lower_frontier(strategy, x, half, grid, seed, "lower")
    i_up = lower_frontier(strategy, 1.0 - x, half, grid, seed, "upper")
    lower = grid.point(max(i_low, 0))
    upper = grid.point(grid.g - max(i_up, 0))
    degenerate = i_low == grid.g or i_up == grid.g
    if lower > upper:
        lower = upper = grid.snap(0.5 * (lower + upper))
        degenerate = True
    return IntervalResult(
        lower=lower,
        upper=upper,
        delta_total=delta_total,
        frontier_lower=i_low,
        frontier_upper=grid.g - i_up,
        method=method or strategy.rule.name.lower().replace("_", "-"),
        seed=seed,
        degenerate=degenerate,
    )
