"""Bare-bones SVG line plots: a frame, tick labels and up to a few polylines."""
from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 640, 400
MARGIN = dict(left=70, right=20, top=40, bottom=50)
COLORS = ("#1f4e9c", "#c0392b", "#27864a", "#7d3c98")


def _ticks(lo, hi, n=5):
    if hi == lo:
        return [lo]
    return list(np.linspace(lo, hi, n))


def line_plot(x, series, xlabel="", ylabel="", title="") -> str:
    """SVG document for ``series``, a list of (label, y) sharing abscissa ``x``."""
    x = np.asarray(x, dtype=float)
    ys = [np.asarray(y, dtype=float) for _, y in series]
    x0, x1 = float(x.min()), float(x.max())
    y0 = min(float(y.min()) for y in ys)
    y1 = max(float(y.max()) for y in ys)
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pw = WIDTH - MARGIN["left"] - MARGIN["right"]
    ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def sx(v):
        return MARGIN["left"] + (v - x0) / (x1 - x0) * pw

    def sy(v):
        return MARGIN["top"] + (1 - (v - y0) / (y1 - y0)) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'font-family="sans-serif" font-size="12">',
        f'<rect x="{MARGIN["left"]}" y="{MARGIN["top"]}" width="{pw}" height="{ph}" '
        'fill="none" stroke="black"/>',
        f'<text x="{WIDTH / 2:.1f}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<text x="{WIDTH / 2:.1f}" y="{HEIGHT - 10}" text-anchor="middle">{escape(xlabel)}</text>',
        f'<text x="16" y="{HEIGHT / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 16 {HEIGHT / 2:.1f})">{escape(ylabel)}</text>',
    ]
    for v in _ticks(x0, x1):
        out.append(f'<text x="{sx(v):.1f}" y="{HEIGHT - MARGIN["bottom"] + 16}" '
                   f'text-anchor="middle">{v:.3g}</text>')
    for v in _ticks(y0, y1):
        out.append(f'<text x="{MARGIN["left"] - 6}" y="{sy(v) + 4:.1f}" '
                   f'text-anchor="end">{v:.3g}</text>')
    for k, ((label, _), y) in enumerate(zip(series, ys)):
        color = COLORS[k % len(COLORS)]
        pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(x, y))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1" points="{pts}"/>')
        ly = MARGIN["top"] + 14 + 14 * k
        out.append(f'<text x="{WIDTH - MARGIN["right"] - 6}" y="{ly}" text-anchor="end" '
                   f'fill="{color}">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
