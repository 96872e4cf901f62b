"""Minimal deterministic SVG plots (line charts, histograms, categorical heat maps).

Output depends only on the input numbers, so the same data always gives the
same bytes.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Mapping, Sequence
from xml.sax.saxutils import escape

__all__ = ["line_plot", "bar_plot", "heatmap", "PALETTE"]

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")
_W, _H = 640, 440
_ML, _MR, _MT, _MB = 70, 130, 30, 55


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = next(s * mag for s in (1, 2, 2.5, 5, 10) if s * mag >= raw)
    start = math.ceil(lo / step - 1e-9) * step
    out = []
    v = start
    while v <= hi + 1e-9 * step:
        out.append(round(v, 12))
        v += step
    return out


class _Canvas:
    def __init__(self, xr, yr, title, xlabel, ylabel):
        self.x0, self.x1 = xr
        self.y0, self.y1 = yr
        if self.x1 <= self.x0:
            self.x1 = self.x0 + 1.0
        if self.y1 <= self.y0:
            self.y1 = self.y0 + 1.0
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" viewBox="0 0 {_W} {_H}">',
            '<rect width="100%" height="100%" fill="white"/>',
            f'<text x="{_W / 2}" y="18" text-anchor="middle" font-family="sans-serif" font-size="14">{escape(title)}</text>',
        ]
        self.xlabel, self.ylabel = xlabel, ylabel

    def px(self, x):
        return _ML + (x - self.x0) / (self.x1 - self.x0) * (_W - _ML - _MR)

    def py(self, y):
        return _H - _MB - (y - self.y0) / (self.y1 - self.y0) * (_H - _MT - _MB)

    def axes(self):
        p = self.parts
        left, right, top, bottom = _ML, _W - _MR, _MT, _H - _MB
        p.append(f'<rect x="{left}" y="{top}" width="{right - left}" height="{bottom - top}" fill="none" stroke="black"/>')
        for t in _ticks(self.x0, self.x1):
            x = self.px(t)
            p.append(f'<line x1="{x:.2f}" y1="{bottom}" x2="{x:.2f}" y2="{bottom + 5}" stroke="black"/>')
            p.append(f'<text x="{x:.2f}" y="{bottom + 18}" text-anchor="middle" font-family="sans-serif" font-size="11">{_fmt(t)}</text>')
        for t in _ticks(self.y0, self.y1):
            y = self.py(t)
            p.append(f'<line x1="{left - 5}" y1="{y:.2f}" x2="{left}" y2="{y:.2f}" stroke="black"/>')
            p.append(f'<text x="{left - 8}" y="{y + 4:.2f}" text-anchor="end" font-family="sans-serif" font-size="11">{_fmt(t)}</text>')
        p.append(f'<text x="{(left + right) / 2}" y="{_H - 15}" text-anchor="middle" font-family="sans-serif" font-size="12">{escape(self.xlabel)}</text>')
        p.append(
            f'<text x="18" y="{(top + bottom) / 2}" text-anchor="middle" font-family="sans-serif" font-size="12" '
            f'transform="rotate(-90 18 {(top + bottom) / 2})">{escape(self.ylabel)}</text>'
        )

    def legend(self, entries):
        for k, (name, colour) in enumerate(entries):
            y = _MT + 15 + 20 * k
            x = _W - _MR + 12
            self.parts.append(f'<rect x="{x}" y="{y - 9}" width="14" height="10" fill="{colour}"/>')
            self.parts.append(f'<text x="{x + 20}" y="{y}" font-family="sans-serif" font-size="11">{escape(name)}</text>')

    def write(self, path):
        self.parts.append("</svg>\n")
        Path(path).write_text("\n".join(self.parts), encoding="utf-8", newline="\n")


def line_plot(series: Mapping[str, Sequence[tuple[float, float]]], path, *, title="", xlabel="", ylabel="") -> None:
    """One polyline with point markers per named series."""
    pts = [p for s in series.values() for p in s if math.isfinite(p[1])]
    if not pts:
        raise ValueError("nothing to plot: all series are empty")
    xs, ys = [p[0] for p in pts], [p[1] for p in pts]
    cv = _Canvas((min(0.0, min(xs)), max(xs)), (min(0.0, min(ys)), max(ys) * 1.05 or 1.0), title, xlabel, ylabel)
    cv.axes()
    legend = []
    for k, (name, s) in enumerate(series.items()):
        colour = PALETTE[k % len(PALETTE)]
        good = [(x, y) for x, y in s if math.isfinite(y)]
        coords = " ".join(f"{cv.px(x):.2f},{cv.py(y):.2f}" for x, y in good)
        cv.parts.append(f'<polyline points="{coords}" fill="none" stroke="{colour}" stroke-width="1.5"/>')
        for x, y in good:
            cv.parts.append(f'<circle cx="{cv.px(x):.2f}" cy="{cv.py(y):.2f}" r="2.5" fill="{colour}"/>')
        legend.append((name, colour))
    cv.legend(legend)
    cv.write(path)


def bar_plot(edges: Sequence[float], counts: Sequence[float], path, *, title="", xlabel="", ylabel="count", label="") -> None:
    """Histogram bars on the given bin edges."""
    if len(counts) == 0 or len(edges) != len(counts) + 1:
        raise ValueError("histogram needs len(edges) == len(counts) + 1 > 1")
    cv = _Canvas((float(edges[0]), float(edges[-1])), (0.0, max(float(max(counts)), 1.0) * 1.05), title, xlabel, ylabel)
    cv.axes()
    for a, b, n in zip(edges[:-1], edges[1:], counts):
        x0, x1 = cv.px(a), cv.px(b)
        y = cv.py(n)
        cv.parts.append(
            f'<rect x="{x0:.2f}" y="{y:.2f}" width="{max(x1 - x0, 0.0):.2f}" height="{cv.py(0) - y:.2f}" fill="{PALETTE[0]}"/>'
        )
    if label:
        cv.legend([(label, PALETTE[0])])
    cv.write(path)


def heatmap(
    xs: Sequence[float],
    ys: Sequence[float],
    cells: Sequence[Sequence[str]],
    colours: Mapping[str, str],
    path,
    *,
    title="",
    xlabel="",
    ylabel="",
) -> None:
    """Categorical cell grid; ``cells[i][j]`` is drawn at ``(xs[i], ys[j])``."""
    if len(xs) == 0 or len(ys) == 0:
        raise ValueError("heat map grid is empty")
    dx = (xs[-1] - xs[0]) / max(len(xs) - 1, 1) or 1.0
    dy = (ys[-1] - ys[0]) / max(len(ys) - 1, 1) or 1.0
    cv = _Canvas((xs[0] - dx / 2, xs[-1] + dx / 2), (ys[0] - dy / 2, ys[-1] + dy / 2), title, xlabel, ylabel)
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            x0, x1 = cv.px(x - dx / 2), cv.px(x + dx / 2)
            y0, y1 = cv.py(y + dy / 2), cv.py(y - dy / 2)
            cv.parts.append(
                f'<rect x="{x0:.2f}" y="{y0:.2f}" width="{x1 - x0:.2f}" height="{y1 - y0:.2f}" fill="{colours[cells[i][j]]}"/>'
            )
    cv.axes()
    cv.legend(list(colours.items()))
    cv.write(path)
