"""Minimal polyline SVG plots (fixed 800x600 view box, optional log y axis)."""

from __future__ import annotations

import math

import numpy as np

WIDTH, HEIGHT, MARGIN = 800, 600, 60
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf")


def polyline_plot(x, series: dict, log_y: bool = False, title: str = "") -> str:
    x = np.asarray(x, dtype=float)
    ys = {k: np.asarray(v, dtype=float) for k, v in series.items()}
    if log_y:
        ys = {k: np.log10(np.where(v > 0, v, np.nan)) for k, v in ys.items()}
    finite = np.concatenate([v[np.isfinite(v)] for v in ys.values()] or [np.zeros(1)])
    ylo, yhi = (float(finite.min()), float(finite.max())) if finite.size else (0.0, 1.0)
    if yhi == ylo:
        ylo, yhi = ylo - 1.0, yhi + 1.0
    xlo, xhi = float(x.min()), float(x.max())
    if xhi == xlo:
        xlo, xhi = xlo - 1.0, xhi + 1.0

    def px(v):
        return MARGIN + (v - xlo) / (xhi - xlo) * (WIDTH - 2 * MARGIN)

    def py(v):
        return HEIGHT - MARGIN - (v - ylo) / (yhi - ylo) * (HEIGHT - 2 * MARGIN)

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" '
             f'width="{WIDTH}" height="{HEIGHT}">',
             f'<rect x="{MARGIN}" y="{MARGIN}" width="{WIDTH - 2 * MARGIN}" '
             f'height="{HEIGHT - 2 * MARGIN}" fill="none" stroke="#000"/>']
    if title:
        parts.append(f'<text x="{WIDTH / 2}" y="{MARGIN / 2}" text-anchor="middle">{_escape(title)}</text>')
    ylab = "log10 y" if log_y else "y"
    parts.append(f'<text x="{MARGIN}" y="{HEIGHT - MARGIN / 3}">x: [{xlo:.4g}, {xhi:.4g}]  '
                 f'{ylab}: [{ylo:.4g}, {yhi:.4g}]</text>')
    for k, (name, y) in enumerate(ys.items()):
        color = COLORS[k % len(COLORS)]
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x, y) if math.isfinite(b))
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        parts.append(f'<text x="{WIDTH - MARGIN + 5}" y="{MARGIN + 15 * (k + 1)}" fill="{color}" '
                     f'font-size="11">{_escape(name)}</text>')
    parts.append("</svg>\n")
    return "\n".join(parts)


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
