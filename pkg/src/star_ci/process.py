"""Test processes: wealth evolution, the Markov rejection rule and last-round randomization.

A test process for the hypothesis ``H0(m): E[X] = m`` starts with unit wealth and
multiplies it every round by a factor whose conditional expectation is at most one
under the null.  Two factor families are supported:

* linear: ``1 + bet * (x - m)`` with ``0 <= bet <= 1``;
* compensated exponential: ``exp(bet * (x - m) - psi(bet))`` where ``psi(bet)`` is
  ``bet**2 / 8`` (Hoeffding) or ``sigma_sq * bet**2`` (Bernstein).

All wealth is tracked as natural log; bankruptcy is ``-inf``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Protocol, Sequence

import numpy as np

from .errors import ContractError, InputError, ObservationRangeError

NEG_INF = -math.inf


@dataclass(frozen=True)
class ProcessKind:
    """Wealth-update family.  ``psi_coef`` is the quadratic compensator coefficient."""

    linear: bool
    psi_coef: float = 0.0

    def psi(self, bet: float) -> float:
        return self.psi_coef * bet * bet

    @classmethod
    def hoeffding(cls) -> "ProcessKind":
        return cls(linear=False, psi_coef=0.125)

    @classmethod
    def bernstein(cls, sigma_sq: float) -> "ProcessKind":
        return cls(linear=False, psi_coef=float(sigma_sq))


LINEAR = ProcessKind(linear=True)


@dataclass(frozen=True)
class BetState:
    """Running state of one one-sided test.

    ``t`` is the round about to be played (1-based); after the last round ``t == n + 1``.
    ``v_sum`` accumulates ``(x_i - m)**2`` over the rounds already played.
    """

    m: float
    n: int
    delta: float
    t: int = 1
    log_wealth: float = 0.0
    v_sum: float = 0.0
    rejected: bool = False

    def __post_init__(self):
        if not 0.0 <= self.m <= 1.0:
            raise ContractError(f"hypothesised mean must lie in [0, 1], got {self.m}")
        if not 0.0 < self.delta <= 1.0:
            raise ContractError(f"delta must lie in (0, 1], got {self.delta}")
        if self.n < 1:
            raise ContractError("horizon must be at least 1")

    @property
    def log_target(self) -> float:
        return math.log(1.0 / self.delta)

    @property
    def remaining(self) -> int:
        """Rounds left including the current one."""
        return self.n - self.t + 1

    @property
    def residual_target(self) -> float:
        """``log(1 / (W_t * delta))``: how much log-wealth is still missing."""
        return self.log_target - self.log_wealth


@dataclass(frozen=True)
class TestOutcome:
    __test__ = False  # keep pytest from collecting this as a test class

    rejected: bool
    final_log_wealth: float
    trajectory: Optional[np.ndarray] = None
    stop_round: Optional[int] = None

    @property
    def final_wealth(self) -> float:
        return math.exp(self.final_log_wealth)


class Strategy(Protocol):
    """Anything that picks a bet from the visible state."""

    early_stop: bool

    def decide(self, state: BetState): ...


def step(state: BetState, kind: ProcessKind, bet: float, x: float) -> BetState:
    """Play one round with stake ``bet`` on observation ``x``."""
    if not 0.0 <= x <= 1.0:
        raise ObservationRangeError(f"observation {x!r} outside [0, 1]")
    if not (bet >= 0.0 and math.isfinite(bet)):
        raise ContractError(f"bet must be finite and nonnegative, got {bet!r}")
    if kind.linear and bet > 1.0:
        raise ContractError(f"linear bets must lie in [0, 1], got {bet!r}")
    if state.t > state.n:
        raise ContractError(f"round {state.t} is past the horizon n={state.n}")

    d = x - state.m
    if kind.linear:
        arg = bet * d
        inc = NEG_INF if 1.0 + arg <= 0.0 else math.log1p(arg)
    else:
        inc = bet * d - kind.psi(bet)
    log_wealth = state.log_wealth + inc
    return replace(
        state,
        t=state.t + 1,
        log_wealth=log_wealth,
        v_sum=state.v_sum + d * d,
        rejected=state.rejected or log_wealth >= state.log_target,
    )


def _as_sample(sample: Sequence[float]) -> np.ndarray:
    x = np.asarray(sample, dtype=float)
    if x.ndim != 1:
        raise InputError("sample must be one-dimensional")
    if x.size == 0:
        raise InputError("sample is empty")
    if not np.all((x >= 0.0) & (x <= 1.0)):
        bad = int(np.argmax(~((x >= 0.0) & (x <= 1.0))))
        raise ObservationRangeError(f"observation {x[bad]!r} at position {bad} outside [0, 1]")
    return x


def run_test(strategy: Strategy, sample: Sequence[float], m: float, delta: float,
             trajectory: bool = False) -> TestOutcome:
    """Run ``strategy`` against ``H0(m)`` on ``sample`` round by round.

    With ``strategy.early_stop`` the first crossing of ``log(1/delta)`` is latched and
    every later bet is forced to zero, so the wealth is frozen but the trajectory still
    has length ``n``.  Without it the decision is taken on the final wealth only.
    """
    x = _as_sample(sample)
    state = BetState(m=float(m), n=x.size, delta=float(delta))
    path = np.empty(x.size) if trajectory else None
    stop_round = None
    for i, xi in enumerate(x):
        if stop_round is not None or state.log_wealth == NEG_INF:
            decision_bet, kind = 0.0, LINEAR
        else:
            decision = strategy.decide(state)
            decision_bet, kind = decision.ell, decision.kind
        state = step(state, kind, decision_bet, float(xi))
        if strategy.early_stop and stop_round is None and state.rejected:
            stop_round = i + 1
        if path is not None:
            path[i] = state.log_wealth

    if strategy.early_stop:
        rejected = state.rejected
    else:
        rejected = state.log_wealth >= state.log_target
    return TestOutcome(rejected, state.log_wealth, path, stop_round)


def last_round_randomize(final_log_wealth: float, delta: float, u: float) -> float:
    """All-or-nothing post-processing: wealth becomes ``1/delta`` if ``W >= u/delta``, else 0.

    Returned in log units (``log(1/delta)`` or ``-inf``).  The expected wealth is unchanged
    for ``W <= 1/delta`` and never increases.
    """
    log_target = math.log(1.0 / delta)
    if final_log_wealth == NEG_INF:
        return NEG_INF
    if final_log_wealth >= log_target or u <= 0.0:
        return log_target
    return log_target if final_log_wealth - log_target >= math.log(u) else NEG_INF
