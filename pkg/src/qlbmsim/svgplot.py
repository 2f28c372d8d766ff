"""Minimal text SVG line plots of concentration profiles."""

from __future__ import annotations

from typing import Mapping, Sequence
from xml.sax.saxutils import escape

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"]


def line_plot_svg(
    series: Mapping[str, Sequence[float]],
    width: int = 640,
    height: int = 400,
    title: str = "",
    xlabel: str = "x",
    ylabel: str = "C",
) -> str:
    left, right, top, bottom = 60, 130, 40, 50
    pw, ph = width - left - right, height - top - bottom
    npts = max(len(v) for v in series.values())
    ymax = max((max(v) for v in series.values() if len(v)), default=1.0) or 1.0
    ymax *= 1.05

    def sx(i: float) -> float:
        return left + (pw * i / (npts - 1) if npts > 1 else pw / 2)

    def sy(y: float) -> float:
        return top + ph - ph * y / ymax

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    if title:
        out.append(
            f'<text x="{left + pw / 2:.1f}" y="{top - 14}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{escape(title)}</text>'
        )
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        y = ymax * frac
        out.append(
            f'<text x="{left - 6}" y="{sy(y) + 4:.1f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="10">{y:.3g}</text>'
        )
    ticks = sorted({0, npts - 1, *range(0, npts, max(1, npts // 8))})
    for i in ticks:
        out.append(
            f'<text x="{sx(i):.1f}" y="{top + ph + 14}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="10">{i}</text>'
        )
    out.append(
        f'<text x="{left + pw / 2:.1f}" y="{height - 12}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">{escape(xlabel)}</text>'
    )
    out.append(
        f'<text x="14" y="{top + ph / 2:.1f}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="12" transform="rotate(-90 14 {top + ph / 2:.1f})">{escape(ylabel)}</text>'
    )
    for n, (label, ys) in enumerate(series.items()):
        color = PALETTE[n % len(PALETTE)]
        pts = " ".join(f"{sx(i):.2f},{sy(y):.2f}" for i, y in enumerate(ys))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        ly = top + 16 * n + 10
        out.append(
            f'<line x1="{left + pw + 10}" y1="{ly}" x2="{left + pw + 30}" y2="{ly}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        out.append(
            f'<text x="{left + pw + 36}" y="{ly + 4}" font-family="sans-serif" '
            f'font-size="11">{escape(label)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
