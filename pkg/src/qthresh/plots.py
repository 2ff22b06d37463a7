"""Dependency-free SVG emission: polyline charts and cell-grid heatmaps.

Presentation only; the CSV/JSON outputs are the numerical sources of truth.
"""

from __future__ import annotations

import math
from typing import Sequence

_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"]


def _escape(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
            .replace('"', "&quot;").replace("'", "&#39;"))


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    return [lo + (hi - lo) * i / count for i in range(count + 1)]


def line_chart_svg(series: Sequence[tuple[str, Sequence[tuple[float, float]]]],
                   title: str, x_label: str, y_label: str,
                   width: int = 880, height: int = 560) -> str:
    """Polyline chart; one (label, [(x, y), ...]) pair per series."""
    left, right, top, bottom = 80, 230, 60, 80
    px0, px1 = left, width - right
    py0, py1 = top, height - bottom
    xs = [x for _, pts in series for x, _ in pts]
    ys = [y for _, pts in series for _, y in pts]
    if not xs:
        raise ValueError("nothing to plot")
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo -= pad
    y_hi += pad

    def sx(x: float) -> float:
        return px0 + (x - x_lo) / (x_hi - x_lo) * (px1 - px0)

    def sy(y: float) -> float:
        return py1 - (y - y_lo) / (y_hi - y_lo) * (py1 - py0)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}">',
           '<rect width="100%" height="100%" fill="#ffffff"/>',
           f'<text x="{width / 2:.1f}" y="32" text-anchor="middle" font-size="20" '
           f'font-family="sans-serif">{_escape(title)}</text>']
    for v in _ticks(y_lo, y_hi):
        y = sy(v)
        out.append(f'<line x1="{px0}" y1="{y:.2f}" x2="{px1}" y2="{y:.2f}" '
                   'stroke="#dddddd" stroke-width="1"/>')
        out.append(f'<text x="{px0 - 8}" y="{y + 4:.2f}" text-anchor="end" '
                   f'font-size="12" font-family="sans-serif">{v:.3g}</text>')
    for v in _ticks(x_lo, x_hi):
        x = sx(v)
        out.append(f'<line x1="{x:.2f}" y1="{py1}" x2="{x:.2f}" y2="{py1 + 6}" '
                   'stroke="#000000" stroke-width="1"/>')
        out.append(f'<text x="{x:.2f}" y="{py1 + 22}" text-anchor="middle" '
                   f'font-size="12" font-family="sans-serif">{v:.3g}</text>')
    out.append(f'<line x1="{px0}" y1="{py1}" x2="{px1}" y2="{py1}" stroke="#000" stroke-width="1.5"/>')
    out.append(f'<line x1="{px0}" y1="{py0}" x2="{px0}" y2="{py1}" stroke="#000" stroke-width="1.5"/>')
    lx, ly = px1 + 18, py0 + 10
    for i, (label, pts) in enumerate(series):
        color = _COLORS[i % len(_COLORS)]
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in sorted(pts))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{coords}"/>')
        yy = ly + 22 * i
        out.append(f'<line x1="{lx}" y1="{yy}" x2="{lx + 22}" y2="{yy}" '
                   f'stroke="{color}" stroke-width="3"/>')
        out.append(f'<text x="{lx + 28}" y="{yy + 4}" font-size="12" '
                   f'font-family="sans-serif">{_escape(label)}</text>')
    out.append(f'<text x="{(px0 + px1) / 2:.1f}" y="{height - 20}" text-anchor="middle" '
               f'font-size="14" font-family="sans-serif">{_escape(x_label)}</text>')
    out.append(f'<text x="24" y="{(py0 + py1) / 2:.1f}" text-anchor="middle" font-size="14" '
               f'font-family="sans-serif" transform="rotate(-90 24 {(py0 + py1) / 2:.1f})">'
               f'{_escape(y_label)}</text>')
    out.append("</svg>")
    return "\n".join(out)


def _heat_color(v: float) -> str:
    """Linear dark-blue -> yellow map on [0, 1]; NaN renders grey."""
    if not math.isfinite(v):
        return "#bbbbbb"
    v = min(max(v, 0.0), 1.0)
    lo = (34, 24, 84)
    hi = (253, 231, 37)
    r, g, b = (round(a + (bb - a) * v) for a, bb in zip(lo, hi))
    return f"#{r:02x}{g:02x}{b:02x}"


def heatmap_svg(x_values: Sequence[float], y_values: Sequence[float],
                cells: Sequence[Sequence[float]], title: str,
                x_label: str, y_label: str,
                v_min: float = 0.0, v_max: float = 1.0,
                cell_px: int = 26) -> str:
    """Cell grid heatmap; cells[i][j] is the value at (x_values[i], y_values[j])."""
    nx, ny = len(x_values), len(y_values)
    left, top = 90, 60
    width = left + nx * cell_px + 140
    height = top + ny * cell_px + 80
    span = v_max - v_min if v_max > v_min else 1.0
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}">',
           '<rect width="100%" height="100%" fill="#ffffff"/>',
           f'<text x="{left + nx * cell_px / 2:.1f}" y="32" text-anchor="middle" '
           f'font-size="18" font-family="sans-serif">{_escape(title)}</text>']
    for i in range(nx):
        for j in range(ny):
            # y axis grows upward: last row at the top
            x = left + i * cell_px
            y = top + (ny - 1 - j) * cell_px
            color = _heat_color((cells[i][j] - v_min) / span)
            out.append(f'<rect x="{x}" y="{y}" width="{cell_px}" height="{cell_px}" '
                       f'fill="{color}" stroke="#ffffff" stroke-width="0.5"/>')
    for i, xv in enumerate(x_values):
        if nx > 12 and i % 2 == 1:
            continue
        x = left + i * cell_px + cell_px / 2
        out.append(f'<text x="{x:.1f}" y="{top + ny * cell_px + 18}" text-anchor="middle" '
                   f'font-size="11" font-family="sans-serif">{xv:g}</text>')
    for j, yv in enumerate(y_values):
        if ny > 12 and j % 2 == 1:
            continue
        y = top + (ny - 1 - j) * cell_px + cell_px / 2 + 4
        out.append(f'<text x="{left - 8}" y="{y:.1f}" text-anchor="end" '
                   f'font-size="11" font-family="sans-serif">{yv:g}</text>')
    out.append(f'<text x="{left + nx * cell_px / 2:.1f}" y="{height - 24}" '
               f'text-anchor="middle" font-size="14" font-family="sans-serif">'
               f'{_escape(x_label)}</text>')
    out.append(f'<text x="28" y="{top + ny * cell_px / 2:.1f}" text-anchor="middle" '
               f'font-size="14" font-family="sans-serif" '
               f'transform="rotate(-90 28 {top + ny * cell_px / 2:.1f})">'
               f'{_escape(y_label)}</text>')
    bar_x = left + nx * cell_px + 30
    steps = 24
    bar_h = ny * cell_px
    for s in range(steps):
        v = v_min + span * (s + 0.5) / steps
        y = top + bar_h - (s + 1) * bar_h / steps
        out.append(f'<rect x="{bar_x}" y="{y:.2f}" width="16" height="{bar_h / steps + 0.5:.2f}" '
                   f'fill="{_heat_color((v - v_min) / span)}"/>')
    out.append(f'<text x="{bar_x + 22}" y="{top + 6}" font-size="11" '
               f'font-family="sans-serif">{v_max:g}</text>')
    out.append(f'<text x="{bar_x + 22}" y="{top + bar_h}" font-size="11" '
               f'font-family="sans-serif">{v_min:g}</text>')
    out.append("</svg>")
    return "\n".join(out)
