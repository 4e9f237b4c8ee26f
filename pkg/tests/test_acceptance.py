"""End-to-end acceptance checks, one test per criterion.

Each test records a ``PASS``/``FAIL`` line (printed in the terminal summary) before
asserting, so the report lists every criterion even when some fail.
"""

import math
import os
import subprocess
import sys
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from star_ci import Rule, StrategyConfig
from star_ci.bench import (DistributionSpec, ExperimentConfig, Mode, run_benchmark, sample, summarize,
                           wealth_diagnostics)
from star_ci.engine import final_log_wealths
from star_ci.intervals import GridSpec, lower_confidence_bound
from star_ci.methods import METHODS, UNGUARANTEED
from star_ci.process import last_round_randomize
from star_ci.rng import substream
from star_ci.special import clopper_pearson_lower, student_t_quantile

DELTA = 0.05


def record(name: str, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    assert ok, detail


def _cells(cfg, threads=None):
    return {(c.method, c.n): c for c in summarize(run_benchmark(cfg, threads))}


def test_coverage_calibration():
    cfg = ExperimentConfig(DistributionSpec.bernoulli(0.9), [30, 1000], DELTA, ["star-bets"],
                           reps=1000, seed=20240601)
    start = time.perf_counter()
    cells = _cells(cfg, threads=1)
    elapsed = time.perf_counter() - start
    cov = {n: cells[("star-bets", n)].coverage for n in (30, 1000)}
    ok = all(0.930 <= c <= 0.975 for c in cov.values()) and elapsed < 60
    record("coverage calibration", ok,
           f"coverage n=30 {cov[30]:.3f}, n=1000 {cov[1000]:.3f} (target [0.930, 0.975]); "
           f"{elapsed:.1f}s single-threaded")


def test_guaranteed_coverage_suite():
    floor = 0.95 - 3 * math.sqrt(0.05 * 0.95 / 1000)
    guaranteed = [m for m in METHODS if m not in UNGUARANTEED]
    dists = [DistributionSpec.bernoulli(0.5), DistributionSpec.bernoulli(0.9),
             DistributionSpec.beta(2, 5), DistributionSpec.beta(5, 2)]
    worst, failures = (None, 1.0), []
    for d in dists:
        methods = [m for m in guaranteed if d.is_binary or m not in ("cp", "cp-rand")]
        cfg = ExperimentConfig(d, [30, 256], DELTA, methods, reps=1000, seed=7)
        for (method, n), cell in _cells(cfg).items():
            if cell.coverage < worst[1]:
                worst = (f"{method} on {d.label} n={n}", cell.coverage)
            if cell.coverage < floor:
                failures.append(f"{method}/{d.label}/n={n}: {cell.coverage:.3f}")
    record("guaranteed coverage suite", not failures,
           f"min coverage {worst[1]:.3f} ({worst[0]}), floor {floor:.3f}"
           + (f"; below floor: {', '.join(failures)}" if failures else ""))


def test_star_dominance():
    rng = substream(11, "dominance")
    draws = 10_000
    violations = {"hoeffding": 0, "bernstein": 0}
    rejections = {"hoeffding": 0, "bernstein": 0}
    start = time.perf_counter()
    for _ in range(draws):
        n = int(rng.integers(5, 201))
        a, b = rng.uniform(0.2, 5.0, 2)
        x = rng.beta(a, b, n) if rng.random() < 0.5 else (rng.random(n) < a / (a + b)).astype(float)
        m = float(rng.random())
        delta = float(rng.uniform(0.01, 0.2))
        s2 = float(rng.uniform(0.01, 0.25))
        pairs = {
            "hoeffding": (StrategyConfig(Rule.HOEFFDING), StrategyConfig(Rule.STAR_HOEFFDING)),
            "bernstein": (StrategyConfig(Rule.BERNSTEIN, sigma_sq=s2),
                          StrategyConfig(Rule.STAR_BERNSTEIN, sigma_sq=s2)),
        }
        target = math.log(1 / delta)
        for name, (vanilla, star) in pairs.items():
            v = final_log_wealths(vanilla, x, [m], delta)[0][0] >= target
            s = final_log_wealths(star, x, [m], delta)[0][0] >= target
            rejections[name] += int(v)
            violations[name] += int(v and not s)
    elapsed = time.perf_counter() - start
    ok = sum(violations.values()) == 0 and elapsed < 30
    record("STaR dominance", ok,
           f"{draws} draws, violations {violations}, vanilla rejections {rejections}, {elapsed:.1f}s")


def test_hoeffding_grid_equals_closed_form():
    cfg = StrategyConfig(Rule.HOEFFDING, randomize_last=False)
    grid = GridSpec(1000)
    delta_side = DELTA / 2
    rng = substream(3, "equivalence")
    mismatches = []
    for i in range(100):
        n = int(rng.integers(10, 2001))
        x = rng.beta(*rng.uniform(0.3, 4.0, 2), size=n)
        closed = x.mean() - math.sqrt(math.log(1 / delta_side) / (2 * n))
        expected = max(0, math.floor(closed * grid.g)) / grid.g
        got = lower_confidence_bound(cfg, x, delta_side, grid)
        if got != expected:
            mismatches.append((i, got, expected))
    record("Hoeffding betting/closed-form equivalence", not mismatches,
           f"{100 - len(mismatches)}/100 exact matches" + (f"; first mismatch {mismatches[0]}" if mismatches else ""))


def test_exact_false_rejection_rate():
    cfg = StrategyConfig(Rule.STAR_BETS)
    target = math.log(1 / DELTA)
    reps, n = 10_000, 100
    rng = substream(5, "false-rejection")
    raw = np.empty(reps)
    post = np.empty(reps)
    for r in range(reps):
        x = (rng.random(n) < 0.5).astype(float)
        raw[r] = final_log_wealths(cfg, x, [0.5], DELTA)[0][0]
        post[r] = last_round_randomize(raw[r], DELTA, float(rng.random()))
    freq = float(np.mean(post >= target))
    post_extreme = float(np.mean((post == target) | np.isneginf(post)))
    # wealth landscape over the grid for the STaR rules on a Bernoulli(0.9) sample of 1000
    x = sample(DistributionSpec.bernoulli(0.9), 1000, substream(5, "landscape"))
    grid = GridSpec().points
    landscape = {}
    for rule in (Rule.STAR_BETS, Rule.STAR_HOEFFDING, Rule.STAR_BERNSTEIN):
        strat = StrategyConfig(rule, sigma_sq=0.09 if rule.needs_variance else None)
        landscape[rule.name.lower()] = wealth_diagnostics(strat, x, DELTA, grid).all_or_nothing_fraction(DELTA)
    ok = 0.043 <= freq <= 0.057 and post_extreme >= 0.99 and min(landscape.values()) >= 0.99
    record("exact false-rejection rate", ok,
           f"rejection frequency {freq:.4f} (target [0.043, 0.057]); wealth in {{0, 1/delta}} "
           f"after randomization {post_extreme:.3f}; grid share at 0 or >= 1/delta "
           + ", ".join(f"{k} {v:.3f}" for k, v in landscape.items()))


def test_supermartingale_property():
    reps, n = 10_000, 100
    dists = [DistributionSpec.bernoulli(0.5), DistributionSpec.bernoulli(0.9), DistributionSpec.beta(2, 5)]
    worst = (None, -np.inf)
    failures = []
    for d in dists:
        xs = [sample(d, n, substream(9, "supermartingale", d.label, r)) for r in range(reps)]
        for rule in Rule:
            strat = StrategyConfig(rule, sigma_sq=d.true_variance if rule.needs_variance else None)
            w = np.exp([final_log_wealths(strat, x, [d.true_mean], DELTA)[0][0] for x in xs])
            mean, se = w.mean(), w.std(ddof=1) / math.sqrt(reps)
            slack = (mean - 1) / se if se > 0 else (mean - 1) * np.inf
            if slack > worst[1]:
                worst = (f"{rule.name.lower()} on {d.label}", slack)
            if mean > 1 + 3 * se:
                failures.append(f"{rule.name.lower()}/{d.label}: {mean:.4f} (se {se:.4f})")
    record("supermartingale property", not failures,
           f"largest (mean - 1)/SE = {worst[1]:.2f} ({worst[0]}), limit 3"
           + (f"; violations: {', '.join(failures)}" if failures else ""))


def test_width_ordering():
    methods = ["star-bets", "bets", "hoeffding-closed", "cp-rand"]
    cfg = ExperimentConfig(DistributionSpec.bernoulli(0.9), [256], DELTA, methods, reps=1000, seed=13,
                           mode=Mode.LOWER_ONLY)
    w = {m: c.mean_width for (m, _), c in _cells(cfg).items()}
    ok = w["star-bets"] < w["bets"] < w["hoeffding-closed"] and w["star-bets"] <= 1.3 * w["cp-rand"]
    record("width ordering", ok,
           ", ".join(f"{m} {w[m]:.4f}" for m in methods)
           + f"; star-bets/cp-rand = {w['star-bets'] / w['cp-rand']:.3f} (limit 1.3)")


def test_width_scaling():
    ns = [64, 256, 1024, 4096]
    cfg = ExperimentConfig(DistributionSpec.bernoulli(0.9), ns, DELTA, ["star-bets"], reps=500, seed=17,
                           mode=Mode.LOWER_ONLY)
    cells = _cells(cfg)
    dist = np.array([cells[("star-bets", n)].mean_width for n in ns])
    slope = float(np.polyfit(np.log(ns), np.log(dist), 1)[0])
    bound = 1.5 * 0.3 * math.sqrt(2 * math.log(1 / DELTA) / 4096)
    ok = -0.6 <= slope <= -0.4 and dist[-1] <= bound
    record("width scaling", ok,
           f"slope {slope:.3f} (target [-0.6, -0.4]); n=4096 distance {dist[-1]:.5f} <= {bound:.5f}")


def test_baseline_golden_values():
    cp = clopper_pearson_lower(30, 30, DELTA / 2)
    tq = student_t_quantile(0.975, 1)
    cfg = ExperimentConfig(DistributionSpec.bernoulli(0.5), [30], DELTA, ["cp-rand"], reps=2000, seed=19)
    cov = _cells(cfg)[("cp-rand", 30)].coverage
    ok = abs(cp - 0.025 ** (1 / 30)) <= 1e-8 and abs(tq - 12.7062) <= 1e-3 and 0.935 <= cov <= 0.965
    record("baseline golden values", ok,
           f"CP lower {cp:.10f} vs {0.025 ** (1 / 30):.10f}; t quantile {tq:.5f}; "
           f"randomized CP coverage {cov:.4f} (target [0.935, 0.965])")


def _bench_csv(tmp_path, name, threads):
    out = tmp_path / name
    cmd = [sys.executable, "-m", "star_ci.cli", "bench", "--dist", "bernoulli:0.9", "--n", "16,64",
           "--reps", "40", "--methods", "star-bets,cp-rand,emp-bernstein,t-test", "--seed", "23",
           "--out", str(out)]
    env = {**os.environ, "STAR_CI_THREADS": str(threads)}
    subprocess.run(cmd, check=True, env=env, capture_output=True)
    return out.read_bytes()


def test_bench_determinism(tmp_path):
    a = _bench_csv(tmp_path, "a.csv", 1)
    b = _bench_csv(tmp_path, "b.csv", 1)
    c = _bench_csv(tmp_path, "c.csv", 4)
    ok = a == b == c and len(a) > 0
    record("bench determinism", ok, f"{len(a)} bytes; identical across runs and 1 vs 4 threads: {ok}")
