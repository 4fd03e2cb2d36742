"""Minimal SVG charts (log-scale y axis) for the benchmark and range outputs.

Written by hand to avoid a plotting dependency; the charts are meant for a
quick look at a run, not as publication figures.
"""

from __future__ import annotations

import math
from decimal import Decimal
from fractions import Fraction
from typing import Sequence
from xml.sax.saxutils import escape

from .bench import CdfSeries, RangeTable

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
DASHES = ("", "6,3", "2,2", "8,3,2,3")

# CDF panels draw zero errors on a "-inf" band and overflow on an "inf" band
ZERO_BAND = -8.0
INF_BAND = 3.0


def log10(v) -> float:
    if isinstance(v, Decimal):
        v = Fraction(v)
    if isinstance(v, Fraction):
        return math.log10(v.numerator) - math.log10(v.denominator)
    return math.log10(v)


class _Canvas:
    def __init__(self, width: int, height: int):
        self.width, self.height = width, height
        self.parts: list[str] = []

    def add(self, fragment: str) -> None:
        self.parts.append(fragment)

    def text(self, x, y, s, anchor="middle", size=11, rotate=None):
        rot = f' transform="rotate({rotate} {x:.1f} {y:.1f})"' if rotate is not None else ""
        self.add(
            f'<text x="{x:.1f}" y="{y:.1f}" font-size="{size}" text-anchor="{anchor}"{rot}>{escape(s)}</text>'
        )

    def line(self, x1, y1, x2, y2, stroke="#ccc", width=0.5):
        self.add(f'<line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" y2="{y2:.1f}" stroke="{stroke}" stroke-width="{width}"/>')

    def polyline(self, pts, color, dash="", label=""):
        coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in pts)
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        title = f"<title>{escape(label)}</title>" if label else ""
        self.add(
            f'<polyline class="series" data-label="{escape(label)}" points="{coords}" fill="none" '
            f'stroke="{color}" stroke-width="1.5"{dash_attr}>{title}</polyline>'
        )

    def marker(self, x, y, color, label=""):
        self.add(
            f'<circle class="marker" data-label="{escape(label)}" cx="{x:.1f}" cy="{y:.1f}" r="3" fill="{color}"/>'
        )

    def render(self) -> str:
        head = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" height="{self.height}" '
            f'viewBox="0 0 {self.width} {self.height}">\n'
            f'<rect width="{self.width}" height="{self.height}" fill="white"/>\n'
        )
        return head + "\n".join(self.parts) + "\n</svg>\n"


class _Axes:
    """Maps (x, log10 y) into a rectangle of the canvas."""

    def __init__(self, canvas, left, top, w, h, xlim, ylim):
        self.c, self.left, self.top, self.w, self.h = canvas, left, top, w, h
        self.xlim, self.ylim = xlim, ylim

    def px(self, x) -> float:
        x0, x1 = self.xlim
        return self.left + (float(x) - x0) / (x1 - x0) * self.w

    def py(self, ly) -> float:
        y0, y1 = self.ylim
        ly = min(max(ly, y0), y1)
        return self.top + self.h - (ly - y0) / (y1 - y0) * self.h

    def frame(self, xticks, yticks, xlabel, ylabel, title):
        c = self.c
        for x, lab in xticks:
            c.line(self.px(x), self.top, self.px(x), self.top + self.h)
            c.text(self.px(x), self.top + self.h + 14, lab)
        for ly, lab in yticks:
            c.line(self.left, self.py(ly), self.left + self.w, self.py(ly))
            c.text(self.left - 4, self.py(ly) + 4, lab, anchor="end")
        c.add(
            f'<rect x="{self.left}" y="{self.top}" width="{self.w}" height="{self.h}" '
            'fill="none" stroke="black" stroke-width="0.8"/>'
        )
        c.text(self.left + self.w / 2, self.top + self.h + 30, xlabel)
        c.text(self.left - 38, self.top + self.h / 2, ylabel, rotate=-90)
        c.text(self.left + self.w / 2, self.top - 8, title, size=12)

    def legend(self, entries):
        for k, (label, color, dash) in enumerate(entries):
            y = self.top + self.h - 12 - 14 * (len(entries) - 1 - k)
            x = self.left + self.w - 95
            dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
            self.c.add(
                f'<line x1="{x:.1f}" y1="{y:.1f}" x2="{x + 18:.1f}" y2="{y:.1f}" stroke="{color}" '
                f'stroke-width="1.5"{dash_attr}/>'
            )
            self.c.text(x + 22, y + 4, label, anchor="start", size=10)


def _error_level(e: Decimal) -> float:
    if e.is_infinite():
        return INF_BAND
    if e == 0:
        return ZERO_BAND
    return min(max(log10(e), ZERO_BAND), INF_BAND)


def cdf_svg(panels: Sequence[tuple[str, Sequence[CdfSeries]]]) -> str:
    """Side-by-side cumulative error panels, one per ``(title, series)`` pair."""
    pw, ph, margin = 260, 240, 60
    canvas = _Canvas(margin + len(panels) * (pw + margin), ph + 90)
    yticks = [(ZERO_BAND, "-inf"), (-6, "-6"), (-4, "-4"), (-2, "-2"), (0, "0"), (2, "2"), (INF_BAND, "inf")]
    xticks = [(q, f"{int(q * 100)}%") for q in (0, 0.25, 0.5, 0.75, 1.0)]
    for i, (title, series) in enumerate(panels):
        ax = _Axes(canvas, margin + i * (pw + margin), 30, pw, ph, (0.0, 1.0), (ZERO_BAND - 0.5, INF_BAND + 0.5))
        ax.frame(xticks, yticks, "matrices", "log10(relative error)", title)
        legend = []
        for k, s in enumerate(series):
            color, dash = PALETTE[k % len(PALETTE)], DASHES[k % len(DASHES)]
            pts = []
            prev = 0.0
            for pct, err in s.points:
                y = ax.py(_error_level(err))
                pts += [(ax.px(prev), y), (ax.px(pct), y)]
                prev = float(pct)
            ax.c.polyline(pts, color, dash, s.format)
            legend.append((s.format, color, dash))
        ax.legend(legend)
    return canvas.render()


def range_svg(table: RangeTable) -> str:
    """Dynamic range against bit width: one min/max line pair per format family."""
    widths = [r.n for r in table.rows]
    canvas = _Canvas(520, 380)
    lo_w, hi_w = min(widths + [8]), max(widths + [16])
    levels = [log10(v) for r in table.rows for v in (*r.takum, *r.posit, *(r.ieee or ()))]
    levels += [log10(f.min_normal) for f in table.fixed] + [log10(f.max_finite) for f in table.fixed]
    ymin, ymax = math.floor(min(levels) / 50) * 50, math.ceil(max(levels) / 50) * 50
    ax = _Axes(canvas, 70, 30, 400, 300, (lo_w - 2, hi_w + 2), (ymin, ymax))
    step = 50 if ymax - ymin > 200 else 20
    ax.frame(
        [(w, str(w)) for w in widths],
        [(y, f"1e{y}") for y in range(ymin, ymax + 1, step)],
        "bit string length n",
        "dynamic range",
        "Dynamic range",
    )
    families = [
        ("takum", [(r.n, r.takum) for r in table.rows]),
        ("posit", [(r.n, r.posit) for r in table.rows]),
        ("IEEE 754 normal", [(r.n, (r.ieee[0], r.ieee[1])) for r in table.rows if r.ieee]),
        ("IEEE 754 subnormal", [(r.n, (r.ieee[2], r.ieee[1])) for r in table.rows if r.ieee]),
    ]
    legend = []
    for k, (label, pts) in enumerate(families):
        if not pts:
            continue
        color, dash = PALETTE[k], DASHES[k]
        low = [(ax.px(n), ax.py(log10(lo))) for n, (lo, _) in pts]
        high = [(ax.px(n), ax.py(log10(hi))) for n, (_, hi) in pts]
        ax.c.polyline(low, color, dash, f"{label} min")
        ax.c.polyline(high, color, dash, f"{label} max")
        legend.append((label, color, dash))
    for k, f in enumerate(table.fixed):
        color = PALETTE[(k + 4) % len(PALETTE)]
        ax.c.marker(ax.px(f.n), ax.py(log10(f.min_normal)), color, f"{f.format} min")
        ax.c.marker(ax.px(f.n), ax.py(log10(f.max_finite)), color, f"{f.format} max")
        legend.append((f.format, color, ""))
    ax.legend(legend)
    return canvas.render()
