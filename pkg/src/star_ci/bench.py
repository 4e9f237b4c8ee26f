"""Seeded Monte Carlo harness for interval width and coverage experiments.

Every repetition draws its sample from its own substream keyed by
``(seed, "sample", distribution, n, rep)``, so all methods in a cell see the same data
and results do not depend on scheduling.  Randomized methods get a further per-method
seed keyed by ``(seed, "interval", method, n, rep)``.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .baselines import clopper_pearson, BinomialSummary
from .engine import final_log_wealths, log_wealth_trajectory
from .errors import ConfigurationError
from .intervals import GridSpec
from .methods import BINOMIAL, check_method, compute_bounds, needs_variance
from .rng import derive_seed, substream
from .strategies import StrategyConfig


@dataclass(frozen=True)
class DistributionSpec:
    family: str
    params: tuple[float, ...]

    def __post_init__(self):
        fam, p = self.family, self.params
        if fam == "bernoulli" and len(p) == 1 and 0.0 <= p[0] <= 1.0:
            return
        if fam == "beta" and len(p) == 2 and p[0] > 0 and p[1] > 0:
            return
        if fam == "point" and len(p) == 1 and 0.0 <= p[0] <= 1.0:
            return
        raise ConfigurationError(f"invalid distribution {fam}{p}")

    @classmethod
    def parse(cls, text: str) -> "DistributionSpec":
        """Parse ``bernoulli:P``, ``beta:A:B`` or ``point:X``."""
        name, *rest = text.strip().split(":")
        try:
            params = tuple(float(v) for v in rest)
        except ValueError:
            raise ConfigurationError(f"cannot parse distribution {text!r}") from None
        return cls(name.lower(), params)

    @classmethod
    def bernoulli(cls, p: float) -> "DistributionSpec":
        return cls("bernoulli", (float(p),))

    @classmethod
    def beta(cls, a: float, b: float) -> "DistributionSpec":
        return cls("beta", (float(a), float(b)))

    @classmethod
    def point_mass(cls, x: float) -> "DistributionSpec":
        return cls("point", (float(x),))

    @property
    def label(self) -> str:
        return ":".join([self.family] + [f"{v:g}" for v in self.params])

    @property
    def true_mean(self) -> float:
        if self.family == "beta":
            a, b = self.params
            return a / (a + b)
        return self.params[0]

    @property
    def true_variance(self) -> float:
        if self.family == "bernoulli":
            p = self.params[0]
            return p * (1.0 - p)
        if self.family == "beta":
            a, b = self.params
            return a * b / ((a + b) ** 2 * (a + b + 1.0))
        return 0.0

    @property
    def is_binary(self) -> bool:
        return self.family == "bernoulli" or (self.family == "point" and self.params[0] in (0.0, 1.0))


def sample(dist: DistributionSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    if dist.family == "bernoulli":
        return (rng.random(n) < dist.params[0]).astype(float)
    if dist.family == "beta":
        return rng.beta(dist.params[0], dist.params[1], size=n)
    return np.full(n, dist.params[0])


class Mode(enum.Enum):
    TWO_SIDED = "two"
    LOWER_ONLY = "lower"


@dataclass(frozen=True)
class ExperimentConfig:
    distribution: DistributionSpec
    n_list: Sequence[int]
    delta: float = 0.05
    methods: Sequence[str] = ("star-bets",)
    reps: int = 1000
    seed: int = 0
    mode: Mode = Mode.TWO_SIDED
    shuffle_only: bool = False
    grid: GridSpec = field(default_factory=GridSpec)
    randomize: bool = True

    def __post_init__(self):
        if self.reps < 1:
            raise ConfigurationError("reps must be at least 1")
        if not self.n_list or any(n < 1 for n in self.n_list):
            raise ConfigurationError("n_list must be a nonempty list of positive sizes")
        if not 0.0 < self.delta < 1.0:
            raise ConfigurationError(f"delta must lie in (0, 1), got {self.delta}")
        if not self.methods:
            raise ConfigurationError("at least one method is required")
        for m in self.methods:
            check_method(m)
            if m in BINOMIAL and not self.distribution.is_binary:
                raise ConfigurationError(f"{m} needs a {{0, 1}}-valued distribution")


@dataclass(frozen=True)
class BenchRecord:
    method: str
    dist: str
    n: int
    delta: float
    rep: int
    lower: float
    upper: float
    width: float
    covered: Optional[bool]
    seed: int
    true_mean: float
    degenerate: bool = False


def _threads() -> int:
    env = os.environ.get("STAR_CI_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigurationError(f"STAR_CI_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def _draw(cfg: ExperimentConfig, n: int, rep: int) -> np.ndarray:
    dist = cfg.distribution
    if cfg.shuffle_only:
        master = sample(dist, n, substream(cfg.seed, "master", dist.label, n))
        return substream(cfg.seed, "shuffle", dist.label, n, rep).permutation(master)
    return sample(dist, n, substream(cfg.seed, "sample", dist.label, n, rep))


def _run_cell(cfg: ExperimentConfig, method: str, n: int, reps: Iterable[int]) -> list[BenchRecord]:
    dist = cfg.distribution
    mu = dist.true_mean
    side = cfg.mode.value
    sigma_sq = dist.true_variance if needs_variance(method) else None
    out = []
    for rep in reps:
        x = _draw(cfg, n, rep)
        rep_seed = derive_seed(cfg.seed, "interval", method, n, rep)
        b = compute_bounds(method, x, cfg.delta, side, grid=cfg.grid, seed=rep_seed,
                           sigma_sq=sigma_sq, randomize=cfg.randomize)
        if cfg.mode is Mode.TWO_SIDED:
            width = b.upper - b.lower
            covered = b.lower <= mu <= b.upper
        else:
            width = mu - b.lower
            covered = b.lower <= mu
        out.append(BenchRecord(method, dist.label, n, cfg.delta, rep, b.lower, b.upper, width,
                               None if cfg.shuffle_only else covered, rep_seed, mu, b.degenerate))
    return out


def run_benchmark(cfg: ExperimentConfig, threads: Optional[int] = None) -> list[BenchRecord]:
    """All records for ``cfg`` ordered by (method, n, rep) as listed in the config.

    In lower-only mode ``upper`` is 1 and ``width`` is the distance from the lower bound
    to the true mean.  In shuffle mode ``covered`` is ``None``.
    """
    if cfg.distribution.true_variance == 0.0 and any(needs_variance(m) for m in cfg.methods):
        raise ConfigurationError("Bernstein methods need a distribution with positive variance")
    threads = threads or _threads()
    chunk = max(1, math.ceil(cfg.reps / (4 * threads)))
    tasks = [
        (mi, ni, start, method, n, range(start, min(start + chunk, cfg.reps)))
        for mi, method in enumerate(cfg.methods)
        for ni, n in enumerate(cfg.n_list)
        for start in range(0, cfg.reps, chunk)
    ]
    if threads == 1:
        results = [_run_cell(cfg, m, n, reps) for *_, m, n, reps in tasks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(_run_cell, cfg, m, n, reps) for *_, m, n, reps in tasks]
            results = [f.result() for f in futures]
    keyed = sorted(zip(((mi, ni, s) for mi, ni, s, *_ in tasks), results), key=lambda kv: kv[0])
    return [rec for _, recs in keyed for rec in recs]


@dataclass(frozen=True)
class CellSummary:
    method: str
    n: int
    reps: int
    mean_width: float
    coverage: Optional[float]
    coverage_ci: Optional[tuple[float, float]]
    degenerate: int


def summarize(records: Sequence[BenchRecord], level: float = 0.95) -> list[CellSummary]:
    """Mean width, empirical coverage and a Clopper-Pearson interval on the coverage per cell."""
    cells: dict[tuple[str, int], list[BenchRecord]] = {}
    for r in records:
        cells.setdefault((r.method, r.n), []).append(r)
    out = []
    for (method, n), recs in cells.items():
        widths = np.array([r.width for r in recs])
        flags = [r.covered for r in recs if r.covered is not None]
        if flags:
            k = int(sum(flags))
            coverage = k / len(flags)
            ci = clopper_pearson(BinomialSummary(k, len(flags)), 1.0 - level)
        else:
            coverage, ci = None, None
        out.append(CellSummary(method, n, len(recs), float(widths.mean()), coverage, ci,
                               sum(r.degenerate for r in recs)))
    return out


@dataclass(frozen=True)
class ECDF:
    points: list[tuple[float, float]]
    true_mean: float
    level: float  # 1 - delta, drawn as the horizontal reference line

    def at(self, x: float) -> float:
        """Fraction of lower bounds at or below ``x``."""
        y = 0.0
        for px, py in self.points:
            if px <= x:
                y = py
            else:
                break
        return y


def ecdf(records: Sequence[BenchRecord], method: str, n: int) -> ECDF:
    chosen = [r for r in records if r.method == method and r.n == n]
    if not chosen:
        raise ValueError(f"no records for method={method!r}, n={n}")
    lowers = np.sort([r.lower for r in chosen])
    values, counts = np.unique(lowers, return_counts=True)
    ys = np.cumsum(counts) / len(lowers)
    return ECDF([(float(v), float(y)) for v, y in zip(values, ys)],
                chosen[0].true_mean, 1.0 - chosen[0].delta)


@dataclass(frozen=True)
class WealthDiagnostics:
    m_grid: np.ndarray
    final_wealth: np.ndarray
    trajectory_m: float
    trajectory: np.ndarray  # wealth after each round at trajectory_m

    def all_or_nothing_fraction(self, delta: float, tol: float = 1e-3) -> float:
        """Share of grid points whose final wealth is within ``tol/delta`` of 0 or at least 1/delta."""
        scaled = self.final_wealth * delta
        return float(np.mean((scaled >= 1.0) | (scaled <= tol)))


def wealth_diagnostics(strategy: StrategyConfig, sample_: Sequence[float], delta: float,
                       m_grid: Sequence[float], trajectory_m: float = 0.85) -> WealthDiagnostics:
    """Final wealth for every ``m`` (no randomization) and the wealth path at ``trajectory_m``."""
    ms = np.asarray(m_grid, dtype=float)
    log_w, _ = final_log_wealths(strategy, sample_, ms, delta)
    path = log_wealth_trajectory(strategy, sample_, trajectory_m, delta)
    return WealthDiagnostics(ms, np.exp(log_w), float(trajectory_m), np.exp(path))
