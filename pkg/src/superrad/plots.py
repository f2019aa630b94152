"""Static SVG figures written directly as text.

Output depends only on the data, so reruns are byte-identical.
"""

from __future__ import annotations

import numpy as np

__all__ = ["line_plot_svg", "heatmap_svg", "write_svg"]

WIDTH, HEIGHT = 640, 420
MARGIN = dict(left=70, right=150, top=30, bottom=50)
PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#17becf"]


def _f(x):
    return f"{x:.2f}"


def _ticks(lo, hi, count=5):
    if hi == lo:
        return [lo]
    return list(np.linspace(lo, hi, count))


def _frame(title, xlabel, ylabel):
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="18" text-anchor="middle" font-family="sans-serif" font-size="14">{title}</text>',
        f'<text x="{(MARGIN["left"] + WIDTH - MARGIN["right"]) / 2:.1f}" y="{HEIGHT - 10}" '
        f'text-anchor="middle" font-family="sans-serif" font-size="12">{xlabel}</text>',
        f'<text x="16" y="{HEIGHT / 2:.1f}" transform="rotate(-90 16 {HEIGHT / 2:.1f})" '
        f'text-anchor="middle" font-family="sans-serif" font-size="12">{ylabel}</text>',
    ]
    return parts


def _axes(parts, xlo, xhi, ylo, yhi, sx, sy):
    x0, x1 = MARGIN["left"], WIDTH - MARGIN["right"]
    y0, y1 = HEIGHT - MARGIN["bottom"], MARGIN["top"]
    parts.append(f'<rect x="{x0}" y="{y1}" width="{x1 - x0}" height="{y0 - y1}" fill="none" stroke="black"/>')
    for t in _ticks(xlo, xhi):
        px = sx(t)
        parts.append(f'<line x1="{_f(px)}" y1="{y0}" x2="{_f(px)}" y2="{y0 + 5}" stroke="black"/>')
        parts.append(
            f'<text x="{_f(px)}" y="{y0 + 18}" text-anchor="middle" font-family="sans-serif" font-size="10">{t:.3g}</text>'
        )
    for t in _ticks(ylo, yhi):
        py = sy(t)
        parts.append(f'<line x1="{x0 - 5}" y1="{_f(py)}" x2="{x0}" y2="{_f(py)}" stroke="black"/>')
        parts.append(
            f'<text x="{x0 - 8}" y="{_f(py + 3)}" text-anchor="end" font-family="sans-serif" font-size="10">{t:.3g}</text>'
        )


def line_plot_svg(x, curves, title="", xlabel="", ylabel=""):
    """SVG text for one or more curves sharing an x grid.

    ``curves`` is an ordered mapping ``label -> y values``.
    """
    x = np.asarray(x, dtype=float)
    ys = {k: np.asarray(v, dtype=float) for k, v in curves.items()}
    finite = np.concatenate([v[np.isfinite(v)] for v in ys.values()] or [np.zeros(1)])
    ylo, yhi = (float(finite.min()), float(finite.max())) if finite.size else (0.0, 1.0)
    if yhi == ylo:
        ylo, yhi = ylo - 0.5, yhi + 0.5
    xlo, xhi = float(x.min()), float(x.max())
    if xhi == xlo:
        xhi = xlo + 1.0
    x0, x1 = MARGIN["left"], WIDTH - MARGIN["right"]
    y0, y1 = HEIGHT - MARGIN["bottom"], MARGIN["top"]

    def sx(v):
        return x0 + (v - xlo) / (xhi - xlo) * (x1 - x0)

    def sy(v):
        return y0 - (v - ylo) / (yhi - ylo) * (y0 - y1)

    parts = _frame(title, xlabel, ylabel)
    _axes(parts, xlo, xhi, ylo, yhi, sx, sy)
    for k, (label, y) in enumerate(ys.items()):
        color = PALETTE[k % len(PALETTE)]
        pts = " ".join(f"{_f(sx(a))},{_f(sy(b))}" for a, b in zip(x, y) if np.isfinite(b))
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        ly = MARGIN["top"] + 14 + 16 * k
        parts.append(f'<line x1="{x1 + 10}" y1="{ly}" x2="{x1 + 30}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{x1 + 35}" y="{ly + 4}" font-family="sans-serif" font-size="11">{label}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def heatmap_svg(xs, ys, values, title="", xlabel="", ylabel=""):
    """SVG heatmap of ``values[i, j]`` at ``(xs[i], ys[j])`` on a grey scale."""
    xs, ys = np.asarray(xs, dtype=float), np.asarray(ys, dtype=float)
    v = np.asarray(values, dtype=float)
    finite = v[np.isfinite(v)]
    lo, hi = (float(finite.min()), float(finite.max())) if finite.size else (0.0, 1.0)
    span = hi - lo or 1.0
    x0, x1 = MARGIN["left"], WIDTH - MARGIN["right"]
    y0, y1 = HEIGHT - MARGIN["bottom"], MARGIN["top"]
    cw, ch = (x1 - x0) / xs.size, (y0 - y1) / ys.size
    parts = _frame(title, xlabel, ylabel)
    for i in range(xs.size):
        for j in range(ys.size):
            val = v[i, j]
            if np.isfinite(val):
                level = int(round(255 * (1 - (val - lo) / span)))
                fill = f"#{level:02x}{level:02x}{level:02x}"
            else:
                fill = "#ffcccc"
            parts.append(
                f'<rect x="{_f(x0 + i * cw)}" y="{_f(y0 - (j + 1) * ch)}" width="{_f(cw + 0.3)}" '
                f'height="{_f(ch + 0.3)}" fill="{fill}"/>'
            )

    def sx(t):
        return x0 + (t - xs.min()) / ((xs.max() - xs.min()) or 1.0) * (x1 - x0 - cw) + cw / 2

    def sy(t):
        return y0 - (t - ys.min()) / ((ys.max() - ys.min()) or 1.0) * (y0 - y1 - ch) - ch / 2

    _axes(parts, float(xs.min()), float(xs.max()), float(ys.min()), float(ys.max()), sx, sy)
    parts.append(f'<text x="{x1 + 10}" y="{y1 + 14}" font-family="sans-serif" font-size="11">black = {hi:.3g}</text>')
    parts.append(f'<text x="{x1 + 10}" y="{y1 + 30}" font-family="sans-serif" font-size="11">white = {lo:.3g}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_svg(text, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path
