"""Bet-selection rules.

Six rules are provided, in vanilla / target-recalculating pairs:

=================  ==============================================  =============
rule               bet at round t                                  process
=================  ==============================================  =============
HOEFFDING          sqrt(8 L / n)                                   exp, l^2/8
STAR_HOEFFDING     sqrt(8 (L - lgW)_+ / (n - t + 1))               exp, l^2/8
BERNSTEIN          sqrt(L / (n s2))                                exp, s2 l^2
STAR_BERNSTEIN     sqrt((L - lgW)_+ / ((n - t + 1) s2))            exp, s2 l^2
BETS               min(1, sqrt(2 L / (n v)))                       linear
STAR_BETS          min(1, sqrt(2 (L - lgW)_+ / ((n - t + 1) v)))   linear
=================  ==============================================  =============

where ``L = log(1/delta)``, ``lgW`` is the current log-wealth and ``v`` is the running
estimate of ``E[(X - m)^2]``::

    v = min(clip, v_sum / (t - 1) + c * m * n / (t - 1)**2)

with ``clip = m (1 - m)`` by default (or 1) and ``v = clip`` at ``t = 1``.  Passing
``alpha`` replaces the additive term by ``10 log(8/alpha) n / (t - 1)**2``.

The target-recalculating rules only look at the residual target ``L - lgW``, the number
of rounds left and ``v``; they stop betting once the target is met.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

from . import _kernels
from .errors import ConfigurationError
from .process import LINEAR, BetState, ProcessKind


class Rule(enum.IntEnum):
    HOEFFDING = _kernels.HOEFFDING
    STAR_HOEFFDING = _kernels.STAR_HOEFFDING
    BERNSTEIN = _kernels.BERNSTEIN
    STAR_BERNSTEIN = _kernels.STAR_BERNSTEIN
    BETS = _kernels.BETS
    STAR_BETS = _kernels.STAR_BETS

    @property
    def is_star(self) -> bool:
        return self in (Rule.STAR_HOEFFDING, Rule.STAR_BERNSTEIN, Rule.STAR_BETS)

    @property
    def needs_variance(self) -> bool:
        return self in (Rule.BERNSTEIN, Rule.STAR_BERNSTEIN)

    @property
    def is_linear(self) -> bool:
        return self in (Rule.BETS, Rule.STAR_BETS)


class ClipMode(enum.Enum):
    ONE = "one"
    M_ONE_MINUS_M = "m(1-m)"


@dataclass(frozen=True)
class BetDecision:
    ell: float
    kind: ProcessKind


@dataclass(frozen=True)
class StrategyConfig:
    """A betting rule plus its constants.

    ``delta`` is the per-side level used when no explicit level is passed to the
    testing routines.  ``early_stop=None`` picks the rule's own convention: vanilla
    Hoeffding and Bernstein decide on the final wealth, every other rule latches the
    first crossing of the threshold.
    """

    rule: Rule
    delta: float = 0.05
    sigma_sq: Optional[float] = None
    estimator_constant: float = 1.0
    alpha: Optional[float] = None
    clip_mode: ClipMode = ClipMode.M_ONE_MINUS_M
    randomize_last: bool = True
    early_stop: Optional[bool] = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "rule", Rule(self.rule))
        if not 0.0 < self.delta < 1.0:
            raise ConfigurationError(f"delta must lie in (0, 1), got {self.delta}")
        if self.rule.needs_variance:
            if self.sigma_sq is None or not 0.0 < self.sigma_sq <= 0.25:
                raise ConfigurationError(
                    f"{self.rule.name} needs sigma_sq in (0, 1/4], got {self.sigma_sq}"
                )
        if not self.estimator_constant > 0.0:
            raise ConfigurationError("estimator_constant must be positive")
        if self.alpha is not None and not 0.0 < self.alpha < 1.0:
            raise ConfigurationError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.early_stop is None:
            default = self.rule not in (Rule.HOEFFDING, Rule.BERNSTEIN)
            object.__setattr__(self, "early_stop", default)

    @property
    def kind(self) -> ProcessKind:
        if self.rule.is_linear:
            return LINEAR
        if self.rule.needs_variance:
            return ProcessKind.bernstein(self.sigma_sq)
        return ProcessKind.hoeffding()

    @property
    def estimator_coefficients(self) -> tuple[float, float]:
        """(constant, per-m) coefficients of the additive term, both multiplied by n/(t-1)^2."""
        if self.alpha is not None:
            return 10.0 * math.log(8.0 / self.alpha), 0.0
        return 0.0, self.estimator_constant

    def clip_value(self, m: float) -> float:
        return 1.0 if self.clip_mode is ClipMode.ONE else m * (1.0 - m)

    def second_moment(self, state: BetState) -> float:
        coef0, coefm = self.estimator_coefficients
        return _kernels.second_moment(
            state.v_sum, state.t, state.n, state.m, self.clip_value(state.m), coef0, coefm
        )

    def decide(self, state: BetState) -> BetDecision:
        return _DISPATCH[self.rule](self, state)

    def kernel_args(self) -> tuple:
        """Positional rule parameters for the compiled loops in ``_kernels``."""
        kind = self.kind
        coef0, coefm = self.estimator_coefficients
        return (
            int(self.rule),
            kind.linear,
            kind.psi_coef,
            float(self.sigma_sq or 0.0),
            self.clip_mode is ClipMode.ONE,
            coef0,
            coefm,
            bool(self.early_stop),
        )


def _check_round(state: BetState):
    if not 1 <= state.t <= state.n:
        raise ConfigurationError(f"round {state.t} outside [1, {state.n}]")


def hoeffding_bet(config: StrategyConfig, state: BetState) -> BetDecision:
    _check_round(state)
    return BetDecision(math.sqrt(8.0 * state.log_target / state.n), ProcessKind.hoeffding())


def star_hoeffding_bet(config: StrategyConfig, state: BetState) -> BetDecision:
    _check_round(state)
    residual = max(0.0, state.residual_target)
    return BetDecision(math.sqrt(8.0 * residual / state.remaining), ProcessKind.hoeffding())


def _variance(config: StrategyConfig) -> float:
    if config.sigma_sq is None or config.sigma_sq <= 0.0:
        raise ConfigurationError("Bernstein rules need a positive sigma_sq")
    return config.sigma_sq


def bernstein_bet(config: StrategyConfig, state: BetState) -> BetDecision:
    _check_round(state)
    s2 = _variance(config)
    return BetDecision(math.sqrt(state.log_target / (state.n * s2)), ProcessKind.bernstein(s2))


def star_bernstein_bet(config: StrategyConfig, state: BetState) -> BetDecision:
    _check_round(state)
    s2 = _variance(config)
    residual = max(0.0, state.residual_target)
    return BetDecision(math.sqrt(residual / (state.remaining * s2)), ProcessKind.bernstein(s2))


def bets_bet(config: StrategyConfig, state: BetState) -> BetDecision:
    _check_round(state)
    v = config.second_moment(state)
    if v <= 0.0:
        return BetDecision(1.0, LINEAR)
    return BetDecision(min(1.0, math.sqrt(2.0 * state.log_target / (state.n * v))), LINEAR)


def star_bets_bet(config: StrategyConfig, state: BetState) -> BetDecision:
    _check_round(state)
    residual = state.residual_target
    if residual <= 0.0:
        return BetDecision(0.0, LINEAR)
    v = config.second_moment(state)
    if v <= 0.0:
        return BetDecision(1.0, LINEAR)
    return BetDecision(min(1.0, math.sqrt(2.0 * residual / (state.remaining * v))), LINEAR)


_DISPATCH = {
    Rule.HOEFFDING: hoeffding_bet,
    Rule.STAR_HOEFFDING: star_hoeffding_bet,
    Rule.BERNSTEIN: bernstein_bet,
    Rule.STAR_BERNSTEIN: star_bernstein_bet,
    Rule.BETS: bets_bet,
    Rule.STAR_BETS: star_bets_bet,
}
