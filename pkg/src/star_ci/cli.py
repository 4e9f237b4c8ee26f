"""Command-line front end.

    star-ci ci --input FILE [--method star-bets] [--delta 0.05] [--side two|lower|upper]
    star-ci bench --dist bernoulli:0.9 --n 8,16,32 --reps 1000 --methods star-bets,cp --out FILE
    star-ci diagnose --dist bernoulli:0.9 --n 1000 --method star-hoeffding --out FILE
    star-ci plot --in FILE --kind widths|ecdf --out FILE [--n INT]

Exit codes: 0 success, 2 malformed input or usage, 3 observation out of range,
4 missing required flag, 5 output not writable, 6 ``ecdf`` plot without ``--n``.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from typing import Optional, Sequence

import numpy as np

from .bench import (BenchRecord, DistributionSpec, ExperimentConfig, Mode, ecdf, run_benchmark,
                    sample as draw_sample, summarize, wealth_diagnostics)
from .errors import ConfigurationError, InputError, ObservationRangeError
from .intervals import GridSpec
from .methods import BETTING, METHODS, compute_bounds, needs_variance, strategy_for
from .rng import substream
from .svg import ecdf_svg, widths_svg

EXIT_OK = 0
EXIT_MALFORMED = 2
EXIT_RANGE = 3
EXIT_MISSING = 4
EXIT_UNWRITABLE = 5
EXIT_ECDF_N = 6

CSV_HEADER = ("method", "dist", "n", "delta", "rep", "lower", "upper", "width", "covered", "seed")


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def fmt(v: float) -> str:
    """Shortest round-trip decimal, locale independent."""
    return repr(float(v))


def read_observations(path: str) -> np.ndarray:
    """One decimal per line; blank lines and ``#`` comments are ignored."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise CliError(EXIT_MALFORMED, f"cannot read {path}: {exc.strerror}") from None
    values = []
    for lineno, raw in enumerate(lines, start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        try:
            v = float(text)
        except ValueError:
            raise CliError(EXIT_MALFORMED, f"{path}:{lineno}: cannot parse {text!r} as a number") from None
        if not math.isfinite(v):
            raise CliError(EXIT_MALFORMED, f"{path}:{lineno}: non-finite value {text!r}")
        if not 0.0 <= v <= 1.0:
            raise CliError(EXIT_RANGE, f"{path}:{lineno}: observation {v!r} outside [0, 1]")
        values.append(v)
    if not values:
        raise CliError(EXIT_MALFORMED, f"{path}: no observations")
    return np.array(values)


def write_records(records: Sequence[BenchRecord], out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        covered = "" if r.covered is None else str(int(r.covered))
        w.writerow([r.method, r.dist, r.n, fmt(r.delta), r.rep, fmt(r.lower), fmt(r.upper),
                    fmt(r.width), covered, r.seed])


def read_records(path: str) -> list[BenchRecord]:
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise CliError(EXIT_MALFORMED, f"cannot read {path}: {exc.strerror}") from None
    if not rows or tuple(rows[0]) != CSV_HEADER:
        raise CliError(EXIT_MALFORMED, f"{path}: missing or unexpected header")
    if len(rows) == 1:
        raise CliError(EXIT_MALFORMED, f"{path}: no records")
    records = []
    means: dict[str, float] = {}
    for lineno, row in enumerate(rows[1:], start=2):
        try:
            method, dist, n, delta, rep, lower, upper, width, covered, seed = row
            if dist not in means:
                means[dist] = DistributionSpec.parse(dist).true_mean
            records.append(BenchRecord(
                method, dist, int(n), float(delta), int(rep), float(lower), float(upper),
                float(width), None if covered == "" else bool(int(covered)), int(seed), means[dist],
            ))
        except (ValueError, ConfigurationError):
            raise CliError(EXIT_MALFORMED, f"{path}:{lineno}: malformed record") from None
    return records


def _open_out(path: str):
    try:
        return open(path, "w", encoding="utf-8", newline="")
    except OSError as exc:
        raise CliError(EXIT_UNWRITABLE, f"cannot write {path}: {exc.strerror}") from None


def _require(args, *names):
    for name in names:
        if getattr(args, name.replace("-", "_")) is None:
            raise CliError(EXIT_MISSING, f"missing required flag --{name.rstrip('_')}")


def _int_list(text: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise CliError(EXIT_MALFORMED, f"cannot parse size list {text!r}") from None
    if not values:
        raise CliError(EXIT_MALFORMED, "empty size list")
    return values


def cmd_ci(args) -> int:
    _require(args, "input")
    if needs_variance(args.method):
        _require(args, "sigma2")
    x = read_observations(args.input)
    try:
        b = compute_bounds(args.method, x, args.delta, args.side, grid=GridSpec(args.grid),
                           seed=args.seed, sigma_sq=args.sigma2, randomize=not args.no_randomize)
    except ObservationRangeError as exc:
        raise CliError(EXIT_RANGE, str(exc)) from None
    sys.stdout.write(",".join([args.method, str(x.size), fmt(args.delta), fmt(b.lower),
                               fmt(b.upper), fmt(b.upper - b.lower)]) + "\n")
    return EXIT_OK


def cmd_bench(args) -> int:
    _require(args, "dist", "n", "methods", "out")
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    cfg = ExperimentConfig(
        distribution=DistributionSpec.parse(args.dist),
        n_list=_int_list(args.n),
        delta=args.delta,
        methods=methods,
        reps=args.reps,
        seed=args.seed,
        mode=Mode(args.mode),
        shuffle_only=args.shuffle,
        grid=GridSpec(args.grid),
    )
    out = _open_out(args.out)
    records = run_benchmark(cfg)
    with out:
        write_records(records, out)
    lines = ["method,n,reps,mean_width,coverage,coverage_ci_low,coverage_ci_high,degenerate"]
    for s in summarize(records):
        if s.coverage is None:
            cov = ["", "", ""]
        else:
            cov = [f"{s.coverage:.4f}", f"{s.coverage_ci[0]:.4f}", f"{s.coverage_ci[1]:.4f}"]
        lines.append(",".join([s.method, str(s.n), str(s.reps), f"{s.mean_width:.6f}", *cov,
                               str(s.degenerate)]))
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_diagnose(args) -> int:
    _require(args, "out")
    if args.input is None and args.dist is None:
        raise CliError(EXIT_MISSING, "missing required flag --input or --dist")
    if args.input is not None:
        x = read_observations(args.input)
        sigma_sq = args.sigma2
    else:
        _require(args, "n")
        dist = DistributionSpec.parse(args.dist)
        x = draw_sample(dist, args.n, substream(args.seed, "diagnose", dist.label, args.n))
        sigma_sq = args.sigma2 if args.sigma2 is not None else dist.true_variance
    if needs_variance(args.method) and sigma_sq is None:
        raise CliError(EXIT_MISSING, "missing required flag --sigma2")
    strategy = strategy_for(args.method, args.delta, sigma_sq, randomize=False)
    diag = wealth_diagnostics(strategy, x, args.delta, GridSpec(args.grid).points, args.at)
    out = _open_out(args.out)
    with out:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["m", "final_wealth"])
        for m, wealth in zip(diag.m_grid, diag.final_wealth):
            w.writerow([fmt(m), fmt(wealth)])
    if args.trajectory_out:
        traj = _open_out(args.trajectory_out)
        with traj:
            w = csv.writer(traj, lineterminator="\n")
            w.writerow(["round", "wealth"])
            for i, wealth in enumerate(diag.trajectory, start=1):
                w.writerow([i, fmt(wealth)])
    sys.stdout.write(f"all_or_nothing_fraction,{diag.all_or_nothing_fraction(args.delta):.4f}\n")
    return EXIT_OK


def cmd_plot(args) -> int:
    _require(args, "in_", "kind", "out")
    if args.kind == "ecdf" and args.n is None:
        raise CliError(EXIT_ECDF_N, "--kind ecdf needs --n")
    records = read_records(args.in_)
    methods = list(dict.fromkeys(r.method for r in records))
    if args.kind == "widths":
        series = {}
        for s in summarize(records):
            series.setdefault(s.method, []).append((float(s.n), s.mean_width))
        svg = widths_svg({m: series[m] for m in methods})
    else:
        curves = {}
        for m in methods:
            try:
                curves[m] = ecdf(records, m, args.n).points
            except ValueError:
                continue
        if not curves:
            raise CliError(EXIT_MALFORMED, f"no records with n={args.n}")
        first = next(r for r in records if r.n == args.n)
        svg = ecdf_svg(curves, first.true_mean, 1.0 - first.delta, args.n)
    out = _open_out(args.out)
    with out:
        out.write(svg)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(EXIT_MALFORMED, f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="star-ci", description="Betting confidence intervals for [0, 1]-bounded means.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("ci", help="interval for the observations in a file")
    p.add_argument("--input")
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--method", choices=METHODS, default="star-bets")
    p.add_argument("--grid", type=int, default=1000)
    p.add_argument("--side", choices=("two", "lower", "upper"), default="two")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sigma2", type=float)
    p.add_argument("--no-randomize", action="store_true")
    p.set_defaults(func=cmd_ci)

    p = sub.add_parser("bench", help="Monte Carlo width / coverage experiment")
    p.add_argument("--dist")
    p.add_argument("--n")
    p.add_argument("--reps", type=int, default=1000)
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--methods")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--mode", choices=("two", "lower"), default="two")
    p.add_argument("--shuffle", action="store_true")
    p.add_argument("--grid", type=int, default=1000)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("diagnose", help="final wealth across m and a wealth trajectory")
    p.add_argument("--input")
    p.add_argument("--dist")
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--method", choices=tuple(BETTING), default="star-bets")
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--sigma2", type=float)
    p.add_argument("--grid", type=int, default=1000)
    p.add_argument("--at", type=float, default=0.85)
    p.add_argument("--out")
    p.add_argument("--trajectory-out")
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("plot", help="SVG chart from a bench CSV")
    p.add_argument("--in", dest="in_")
    p.add_argument("--kind", choices=("widths", "ecdf"))
    p.add_argument("--out")
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.code
    except ObservationRangeError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_RANGE
    except (InputError, ConfigurationError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
