"""Registry of interval methods addressable by id from the CLI and the benchmark harness."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import baselines
from .errors import ConfigurationError
from .intervals import GridSpec, confidence_interval, lower_frontier
from .process import _as_sample
from .rng import substream
from .special import clopper_pearson_lower, randomized_clopper_pearson_lower
from .strategies import Rule, StrategyConfig

BETTING = {
    "star-bets": Rule.STAR_BETS,
    "bets": Rule.BETS,
    "hoeffding": Rule.HOEFFDING,
    "star-hoeffding": Rule.STAR_HOEFFDING,
    "bernstein": Rule.BERNSTEIN,
    "star-bernstein": Rule.STAR_BERNSTEIN,
}
CLOSED_FORM = {
    "hoeffding-closed": baselines.hoeffding_lower,
    "emp-bernstein": baselines.empirical_bernstein_lower,
    "t-test": baselines.t_test_lower,
}
BINOMIAL = ("cp", "cp-rand")
METHODS = tuple(BETTING) + tuple(CLOSED_FORM) + BINOMIAL
SIDES = ("two", "lower", "upper")

# methods without a finite-sample coverage guarantee
UNGUARANTEED = frozenset({"t-test"})


@dataclass(frozen=True)
class Bounds:
    lower: float
    upper: float
    degenerate: bool = False

    @property
    def width(self) -> float:
        return self.upper - self.lower


def check_method(method: str) -> str:
    if method not in METHODS:
        raise ConfigurationError(f"unknown method {method!r}; available: {', '.join(METHODS)}")
    return method


def needs_variance(method: str) -> bool:
    return method in ("bernstein", "star-bernstein")


def strategy_for(method: str, delta: float = 0.05, sigma_sq: Optional[float] = None,
                 randomize: bool = True) -> StrategyConfig:
    if method not in BETTING:
        raise ConfigurationError(f"{method!r} is not a betting method")
    if needs_variance(method) and sigma_sq is None:
        raise ConfigurationError(f"{method} needs the variance (sigma2)")
    return StrategyConfig(rule=BETTING[method], delta=delta, sigma_sq=sigma_sq,
                          randomize_last=randomize)


def compute_bounds(method: str, sample, delta: float, side: str = "two", *,
                   grid: GridSpec = GridSpec(), seed: int = 0,
                   sigma_sq: Optional[float] = None, randomize: bool = True) -> Bounds:
    """Interval or one-sided bound for ``sample`` with method ``method``.

    ``side="two"`` spends ``delta / 2`` per side; ``"lower"`` and ``"upper"`` spend the
    whole ``delta`` on one side and report the trivial bound (0 or 1) on the other.
    """
    check_method(method)
    if side not in SIDES:
        raise ConfigurationError(f"side must be one of {SIDES}, got {side!r}")
    if not 0.0 < delta < 1.0:
        raise ConfigurationError(f"delta must lie in (0, 1), got {delta}")
    x = _as_sample(sample)

    if method in BETTING:
        strategy = strategy_for(method, delta, sigma_sq, randomize)
        if side == "two":
            res = confidence_interval(strategy, x, delta, grid, seed, method)
            return Bounds(res.lower, res.upper, res.degenerate)
        if side == "lower":
            i = lower_frontier(strategy, x, delta, grid, seed, "lower")
            return Bounds(grid.point(max(i, 0)), 1.0, i == grid.g)
        i = lower_frontier(strategy, 1.0 - x, delta, grid, seed, "upper")
        return Bounds(0.0, grid.point(grid.g - max(i, 0)), i == grid.g)

    if method in CLOSED_FORM:
        fn = CLOSED_FORM[method]
        half = delta / 2.0 if side == "two" else delta
        lower = fn(x, half) if side != "upper" else 0.0
        upper = 1.0 - fn(1.0 - x, half) if side != "lower" else 1.0
        return Bounds(lower, upper)

    summary = baselines.BinomialSummary.from_sample(x)
    half = delta / 2.0 if side == "two" else delta
    if method == "cp":
        lower_fn = lambda k, label: clopper_pearson_lower(k, summary.n, half)  # noqa: E731
    else:
        def lower_fn(k, label):
            u = float(substream(seed, "cp-rand", label).random())
            return randomized_clopper_pearson_lower(k, summary.n, half, u)
    lower = lower_fn(summary.k, "lower") if side != "upper" else 0.0
    upper = 1.0 - lower_fn(summary.n - summary.k, "upper") if side != "lower" else 1.0
    return Bounds(lower, upper)
