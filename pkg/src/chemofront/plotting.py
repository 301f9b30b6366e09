"""Minimal deterministic SVG line plots.

No plotting library: the output must be byte-identical for identical input,
self-contained, and cheap to diff.  Good enough for the figure-style
artifacts (front speed evolution, density profiles).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InvalidArgument

__all__ = ["PlotSeries", "emit_plot"]

WIDTH, HEIGHT = 720, 480
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 64, 16, 28, 44
COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
          "#e377c2", "#17becf"]


@dataclass(frozen=True)
class PlotSeries:
    label: str
    x: np.ndarray
    y: np.ndarray


def _finite_range(values) -> tuple[float, float]:
    finite = [v for v in values if math.isfinite(v)]
    if not finite:
        raise InvalidArgument("no finite data to plot")
    lo, hi = min(finite), max(finite)
    if lo == hi:
        pad = 0.5 if lo == 0 else abs(lo) * 0.1
        return lo - pad, hi + pad
    return lo, hi


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    span = hi - lo
    step = 10.0 ** math.floor(math.log10(span / n))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if span / (step * mult) <= n:
            step *= mult
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-12 * span:
        ticks.append(0.0 if abs(t) < 1e-12 * span else t)
        t += step
    return ticks


def emit_plot(
    series,
    path,
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
) -> Path:
    """Write a self-contained SVG polyline plot.

    series is a sequence of PlotSeries (or (label, x, y) tuples); single
    points are drawn as markers.  Raises InvalidArgument for empty input.
    """
    items = []
    for s in series:
        if not isinstance(s, PlotSeries):
            s = PlotSeries(*s)
        x = np.asarray(s.x, dtype=float)
        y = np.asarray(s.y, dtype=float)
        if len(x) != len(y):
            raise InvalidArgument(f"series {s.label!r}: x and y lengths differ")
        if len(x) == 0:
            raise InvalidArgument(f"series {s.label!r} is empty")
        items.append(PlotSeries(s.label, x, y))
    if not items:
        raise InvalidArgument("no series to plot")

    xlo, xhi = _finite_range([v for s in items for v in s.x])
    ylo, yhi = _finite_range([v for s in items for v in s.y])
    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B

    def sx(x: float) -> float:
        return MARGIN_L + (x - xlo) / (xhi - xlo) * plot_w

    def sy(y: float) -> float:
        return MARGIN_T + plot_h - (y - ylo) / (yhi - ylo) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#444444" stroke-width="1"/>',
    ]
    for t in _ticks(xlo, xhi):
        px = sx(t)
        out.append(
            f'<line x1="{px:.2f}" y1="{MARGIN_T + plot_h}" x2="{px:.2f}" '
            f'y2="{MARGIN_T + plot_h + 5}" stroke="#444444"/>'
        )
        out.append(
            f'<text x="{px:.2f}" y="{MARGIN_T + plot_h + 18}" font-size="11" '
            f'text-anchor="middle" font-family="sans-serif">{t:g}</text>'
        )
    for t in _ticks(ylo, yhi):
        py = sy(t)
        out.append(
            f'<line x1="{MARGIN_L - 5}" y1="{py:.2f}" x2="{MARGIN_L}" '
            f'y2="{py:.2f}" stroke="#444444"/>'
        )
        out.append(
            f'<text x="{MARGIN_L - 8}" y="{py + 4:.2f}" font-size="11" '
            f'text-anchor="end" font-family="sans-serif">{t:g}</text>'
        )
    if title:
        out.append(
            f'<text x="{WIDTH / 2:.0f}" y="18" font-size="14" text-anchor="middle" '
            f'font-family="sans-serif">{title}</text>'
        )
    if xlabel:
        out.append(
            f'<text x="{MARGIN_L + plot_w / 2:.0f}" y="{HEIGHT - 8}" font-size="12" '
            f'text-anchor="middle" font-family="sans-serif">{xlabel}</text>'
        )
    if ylabel:
        out.append(
            f'<text x="14" y="{MARGIN_T + plot_h / 2:.0f}" font-size="12" '
            f'text-anchor="middle" font-family="sans-serif" '
            f'transform="rotate(-90 14 {MARGIN_T + plot_h / 2:.0f})">{ylabel}</text>'
        )
    for i, s in enumerate(items):
        color = COLORS[i % len(COLORS)]
        pts = [
            (sx(xv), sy(yv))
            for xv, yv in zip(s.x, s.y)
            if math.isfinite(xv) and math.isfinite(yv)
        ]
        if len(pts) == 1:
            out.append(
                f'<circle cx="{pts[0][0]:.2f}" cy="{pts[0][1]:.2f}" r="3" fill="{color}"/>'
            )
        elif pts:
            path_d = " ".join(f"{px:.2f},{py:.2f}" for px, py in pts)
            out.append(
                f'<polyline points="{path_d}" fill="none" stroke="{color}" '
                'stroke-width="1.5"/>'
            )
        if s.label:
            ly = MARGIN_T + 14 + 16 * i
            out.append(
                f'<line x1="{WIDTH - 150}" y1="{ly - 4}" x2="{WIDTH - 126}" '
                f'y2="{ly - 4}" stroke="{color}" stroke-width="1.5"/>'
            )
            out.append(
                f'<text x="{WIDTH - 120}" y="{ly}" font-size="11" '
                f'font-family="sans-serif">{s.label}</text>'
            )
    out.append("</svg>")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(out) + "\n", encoding="utf-8")
    return path
