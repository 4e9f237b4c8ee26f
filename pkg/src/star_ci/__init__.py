"""Finite-sample confidence intervals for bounded means by testing-by-betting."""

from .baselines import (BinomialSummary, clopper_pearson, empirical_bernstein_ci, hoeffding_ci,
                        randomized_clopper_pearson, t_test_ci)
from .errors import ConfigurationError, ContractError, InputError, ObservationRangeError
from .intervals import GridSpec, IntervalResult, confidence_interval, lower_confidence_bound
from .process import BetState, ProcessKind, TestOutcome, last_round_randomize, run_test, step
from .strategies import BetDecision, ClipMode, Rule, StrategyConfig

__all__ = [
    "BetDecision", "BetState", "BinomialSummary", "ClipMode", "ConfigurationError", "ContractError",
    "GridSpec", "InputError", "IntervalResult", "ObservationRangeError", "ProcessKind", "Rule",
    "StrategyConfig", "TestOutcome", "clopper_pearson", "confidence_interval",
    "empirical_bernstein_ci", "hoeffding_ci", "last_round_randomize", "lower_confidence_bound",
    "randomized_clopper_pearson", "run_test", "step", "t_test_ci",
]
