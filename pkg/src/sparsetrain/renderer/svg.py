"""Render MSE and ratio curves as a standalone SVG line chart.

The x axis is logarithmic in multiples of SNR₀, the y axis linear from 0 to
1 (stretched when a value exceeds 1). Output depends only on the input
series, so identical inputs give identical bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from string import Template
from xml.sax.saxutils import escape

import numpy as np

_TEMPLATE_PATH = Path(__file__).with_name("chart.svg")

WIDTH, HEIGHT = 720, 420
LEFT, RIGHT, TOP, BOTTOM = 64, 176, 36, 56
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b")


@dataclass
class Series:
    """One polyline: y values over x given in multiples of SNR₀."""

    label: str
    x: np.ndarray
    y: np.ndarray

    def finite_points(self) -> tuple[np.ndarray, np.ndarray]:
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        keep = np.isfinite(x) & np.isfinite(y) & (x > 0)
        return x[keep], y[keep]


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def _x_range(series: list[Series]) -> tuple[float, float]:
    xs = [np.log10(s.finite_points()[0]) for s in series]
    xs = [x for x in xs if x.size]
    if not xs:
        return -1.0, 1.0
    lo = float(min(x.min() for x in xs))
    hi = float(max(x.max() for x in xs))
    if hi - lo < 1e-12:
        return lo - 0.5, hi + 0.5
    return lo, hi


def _y_top(series: list[Series]) -> float:
    ys = [s.finite_points()[1] for s in series]
    peak = max((float(y.max()) for y in ys if y.size), default=1.0)
    return max(1.0, peak)


def render_svg(series: list[Series], *, title: str, y_label: str) -> str:
    """Return the SVG document for *series*."""
    x_lo, x_hi = _x_range(series)
    y_top = _y_top(series)
    plot_w = WIDTH - LEFT - RIGHT
    plot_h = HEIGHT - TOP - BOTTOM

    def px(log_x: float) -> float:
        return LEFT + (log_x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y: float) -> float:
        return TOP + (1.0 - y / y_top) * plot_h

    bottom, right = TOP + plot_h, LEFT + plot_w
    axes = [
        f'<line x1="{LEFT}" y1="{bottom}" x2="{right}" y2="{bottom}"/>',
        f'<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{bottom}"/>',
    ]
    labels = []

    decades = range(math.ceil(x_lo - 1e-9), math.floor(x_hi + 1e-9) + 1)
    for k in decades:
        x = _fmt(px(k))
        axes.append(f'<line x1="{x}" y1="{bottom}" x2="{x}" y2="{bottom + 5}"/>')
        labels.append(
            f'<text x="{x}" y="{bottom + 18}" text-anchor="middle">{10.0**k:g}</text>'
        )
    if x_lo <= 0.0 <= x_hi:
        x = _fmt(px(0.0))
        axes.append(
            f'<line x1="{x}" y1="{TOP}" x2="{x}" y2="{bottom}" '
            'stroke="#999999" stroke-dasharray="4 4"/>'
        )

    for i in range(5):
        value = y_top * i / 4
        y = _fmt(py(value))
        axes.append(f'<line x1="{LEFT - 5}" y1="{y}" x2="{LEFT}" y2="{y}"/>')
        labels.append(
            f'<text x="{LEFT - 8}" y="{y}" text-anchor="end" '
            f'dominant-baseline="middle">{value:g}</text>'
        )
    labels.append(
        f'<text x="{_fmt(LEFT + plot_w / 2)}" y="{HEIGHT - 16}" '
        'text-anchor="middle">SNR / SNR₀</text>'
    )
    labels.append(
        f'<text x="16" y="{_fmt(TOP + plot_h / 2)}" text-anchor="middle" '
        f'transform="rotate(-90 16 {_fmt(TOP + plot_h / 2)})">{escape(y_label)}</text>'
    )

    lines = []
    legend = []
    for i, s in enumerate(series):
        color = COLORS[i % len(COLORS)]
        x, y = s.finite_points()
        points = " ".join(
            f"{_fmt(px(float(a)))},{_fmt(py(float(b)))}"
            for a, b in zip(np.log10(x), y, strict=True)
        )
        lines.append(f'<polyline points="{points}" stroke="{color}"/>')
        ly = TOP + 12 + 20 * i
        lx = right + 16
        legend.append(
            f'<line x1="{lx}" y1="{ly}" x2="{lx + 24}" y2="{ly}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        legend.append(
            f'<text x="{lx + 30}" y="{ly}" dominant-baseline="middle">'
            f"{escape(s.label)}</text>"
        )

    template = Template(_TEMPLATE_PATH.read_text(encoding="utf-8"))
    return template.substitute(
        width=WIDTH,
        height=HEIGHT,
        title=escape(title),
        axes="\n".join(axes),
        labels="\n".join(labels),
        series="\n".join(lines),
        legend="\n".join(legend),
    )
