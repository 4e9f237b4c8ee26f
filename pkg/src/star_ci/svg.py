"""Minimal self-contained SVG charts: log-log width curves and eCDF step plots.

Data series are drawn as ``<polyline>`` elements, one per method; axes, ticks and
reference lines use ``<line>`` so the polyline count equals the number of series.
"""

from __future__ import annotations

import math
from typing import Mapping, Sequence
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 720, 480
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 170, 30, 55
PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
           "#17becf", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#000000"]
REFERENCE = "#c000c0"


def _fmt(v: float) -> str:
    return f"{v:.2f}"


class _Canvas:
    def __init__(self, xlim, ylim, xlog=False, ylog=False):
        self.xlog, self.ylog = xlog, ylog
        self.x0, self.x1 = (math.log10(v) if xlog else v for v in xlim)
        self.y0, self.y1 = (math.log10(v) if ylog else v for v in ylim)
        if self.x1 == self.x0:
            self.x0, self.x1 = self.x0 - 0.5, self.x1 + 0.5
        if self.y1 == self.y0:
            self.y0, self.y1 = self.y0 - 0.5, self.y1 + 0.5
        self.parts: list[str] = []

    def px(self, x: float) -> float:
        x = math.log10(x) if self.xlog else x
        return MARGIN_L + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - MARGIN_L - MARGIN_R)

    def py(self, y: float) -> float:
        y = math.log10(y) if self.ylog else y
        return HEIGHT - MARGIN_B - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - MARGIN_T - MARGIN_B)

    def line(self, x1, y1, x2, y2, stroke="#000000", width=1.0, cls="axis", dash=None):
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(
            f'<line class="{cls}" x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
            f'stroke="{stroke}" stroke-width="{width}"{extra}/>'
        )

    def text(self, x, y, s, anchor="middle", cls="label", size=12):
        self.parts.append(
            f'<text class="{cls}" x="{_fmt(x)}" y="{_fmt(y)}" font-size="{size}" '
            f'text-anchor="{anchor}" font-family="sans-serif">{escape(s)}</text>'
        )

    def polyline(self, pts, color, name):
        coords = " ".join(f"{_fmt(self.px(x))},{_fmt(self.py(y))}" for x, y in pts)
        self.parts.append(
            f'<polyline class="series" data-method="{escape(name)}" points="{coords}" '
            f'fill="none" stroke="{color}" stroke-width="1.8"/>'
        )

    def axes(self, xlabel, ylabel, xticks, yticks):
        left, right = MARGIN_L, WIDTH - MARGIN_R
        top, bottom = MARGIN_T, HEIGHT - MARGIN_B
        self.line(left, bottom, right, bottom)
        self.line(left, top, left, bottom)
        for v in xticks:
            x = self.px(v)
            self.line(x, bottom, x, bottom + 5)
            self.text(x, bottom + 18, f"{v:g}")
        for v in yticks:
            y = self.py(v)
            self.line(left - 5, y, left, y)
            self.text(left - 8, y + 4, f"{v:.3g}", anchor="end")
        self.text((left + right) / 2, HEIGHT - 12, xlabel)
        self.parts.append(
            f'<text class="label" x="16" y="{_fmt((top + bottom) / 2)}" font-size="12" '
            f'text-anchor="middle" font-family="sans-serif" '
            f'transform="rotate(-90 16 {_fmt((top + bottom) / 2)})">{escape(ylabel)}</text>'
        )

    def legend(self, names):
        x = WIDTH - MARGIN_R + 15
        for i, name in enumerate(names):
            y = MARGIN_T + 10 + 20 * i
            color = PALETTE[i % len(PALETTE)]
            self.parts.append(
                f'<g class="legend-entry"><rect x="{x}" y="{y - 9}" width="18" height="4" fill="{color}"/>'
                f'<text x="{x + 24}" y="{y}" font-size="12" font-family="sans-serif">{escape(name)}</text></g>'
            )

    def render(self, title: str) -> str:
        head = (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
            f'viewBox="0 0 {WIDTH} {HEIGHT}">\n'
            f'<rect width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>\n'
            f'<text x="{(WIDTH - MARGIN_R + MARGIN_L) / 2}" y="18" font-size="14" '
            f'text-anchor="middle" font-family="sans-serif">{escape(title)}</text>\n'
        )
        return head + "\n".join(self.parts) + "\n</svg>\n"


def _log_ticks(lo: float, hi: float) -> list[float]:
    ticks = [10.0 ** k for k in range(math.floor(math.log10(lo)), math.ceil(math.log10(hi)) + 1)]
    inside = [t for t in ticks if lo <= t <= hi]
    return inside or [lo, hi]


def widths_svg(series: Mapping[str, Sequence[tuple[float, float]]], title: str = "mean width") -> str:
    """Log-log chart with one polyline per method; points with nonpositive width are dropped."""
    clean = {k: sorted((x, y) for x, y in v if x > 0 and y > 0) for k, v in series.items()}
    clean = {k: v for k, v in clean.items() if v}
    if not clean:
        raise ValueError("nothing to plot")
    xs = [x for v in clean.values() for x, _ in v]
    ys = [y for v in clean.values() for _, y in v]
    canvas = _Canvas((min(xs), max(xs)), (min(ys) / 1.2, max(ys) * 1.2), xlog=True, ylog=True)
    xticks = sorted(set(xs)) if len(set(xs)) <= 12 else _log_ticks(min(xs), max(xs))
    canvas.axes("n", title, xticks, _log_ticks(min(ys) / 1.2, max(ys) * 1.2))
    for i, (name, pts) in enumerate(clean.items()):
        canvas.polyline(pts, PALETTE[i % len(PALETTE)], name)
    canvas.legend(list(clean))
    return canvas.render(f"{title} vs n (log-log)")


def _steps(points: Sequence[tuple[float, float]], x_min: float, x_max: float):
    out = [(x_min, 0.0)]
    prev = 0.0
    for x, y in points:
        out.append((x, prev))
        out.append((x, y))
        prev = y
    out.append((x_max, prev))
    return out


def ecdf_svg(curves: Mapping[str, Sequence[tuple[float, float]]], true_mean: float, level: float,
             n: int) -> str:
    """Step eCDF per method with a vertical line at the true mean and a horizontal one at ``level``."""
    if not curves:
        raise ValueError("nothing to plot")
    xs = [x for pts in curves.values() for x, _ in pts] + [true_mean]
    span = max(xs) - min(xs) or 0.1
    lo, hi = max(0.0, min(xs) - 0.05 * span), min(1.0, max(xs) + 0.05 * span)
    if hi <= lo:
        lo, hi = max(0.0, lo - 0.05), min(1.0, hi + 0.05)
    canvas = _Canvas((lo, hi), (0.0, 1.0))
    step = (hi - lo) / 5
    canvas.axes("lower confidence bound", "empirical CDF",
                [round(lo + k * step, 4) for k in range(6)], [0.0, 0.25, 0.5, 0.75, 1.0])
    canvas.line(canvas.px(true_mean), canvas.py(0.0), canvas.px(true_mean), canvas.py(1.0),
                stroke=REFERENCE, width=1.2, cls="reference mean", dash="5,3")
    canvas.line(canvas.px(lo), canvas.py(level), canvas.px(hi), canvas.py(level),
                stroke=REFERENCE, width=1.2, cls="reference level", dash="5,3")
    for i, (name, pts) in enumerate(curves.items()):
        canvas.polyline(_steps(pts, lo, hi), PALETTE[i % len(PALETTE)], name)
    canvas.legend(list(curves))
    return canvas.render(f"eCDF of lower bounds, n={n}")
