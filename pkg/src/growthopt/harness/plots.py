"""Static SVG rate plots, hand assembled for byte stability.

The plot is a log-log scatter of mean error against budget with the
least-squares line and a dashed reference line at the theoretical
slope.  No plotting library is involved: the SVG is a deterministic
function of the input numbers, so a fixed table yields a byte-identical
file, which makes golden-file testing trivial.
"""

from __future__ import annotations

import numpy as np

from .sweep import RateFit, mean_by_budget

_W, _H = 640, 480
_L, _R, _T, _B = 70, 24, 24, 56


def _fit_points(data, column):
    if isinstance(data, RateFit):
        pts = np.asarray(data.points, dtype=float)
        return pts, data.slope, data.intercept
    Ts, means = mean_by_budget(data, column)
    if np.any(means <= 0):
        raise ValueError(f"mean {column} must be positive to plot on "
                         f"log axes")
    x, y = np.log(Ts), np.log(means)
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    return np.column_stack([x, y]), float(coef[0]), float(coef[1])


def emit_plot(data, path, theory=None, column="f_error", title=None):
    """Write a rate plot for a RateFit or a sweep table; returns the SVG.

    `theory` is the slope of the dashed reference line; it defaults to
    the fitted slope (so a bare RateFit plots its own rate).
    """
    points, slope, intercept = _fit_points(data, column)
    if len(points) < 2:
        raise ValueError(f"need >= 2 points to plot, got {len(points)}")
    if theory is None:
        theory = slope
    x, y = points[:, 0], points[:, 1]

    def padded(lo, hi):
        pad = 0.05 * (hi - lo) if hi > lo else 1.0
        return lo - pad, hi + pad

    x0, x1 = padded(x.min(), x.max())
    ref_y = y[0] + theory * (x - x[0])
    y_all = np.concatenate([y, slope * x + intercept, ref_y])
    y0, y1 = padded(y_all.min(), y_all.max())

    def sx(v):
        return _L + (v - x0) / (x1 - x0) * (_W - _L - _R)

    def sy(v):
        return _H - _B - (v - y0) / (y1 - y0) * (_H - _T - _B)

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" '
        f'height="{_H}" viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<rect x="{_L}" y="{_T}" width="{_W - _L - _R}" '
        f'height="{_H - _T - _B}" fill="none" stroke="#444"/>',
    ]
    for vx in np.linspace(x.min(), x.max(), 5):
        px = sx(vx)
        parts.append(f'<line x1="{px:.2f}" y1="{_H - _B}" x2="{px:.2f}" '
                     f'y2="{_H - _B + 5}" stroke="#444"/>')
        parts.append(f'<text x="{px:.2f}" y="{_H - _B + 18}" '
                     f'font-size="11" text-anchor="middle">{vx:.2f}</text>')
    for vy in np.linspace(y_all.min(), y_all.max(), 5):
        py = sy(vy)
        parts.append(f'<line x1="{_L - 5}" y1="{py:.2f}" x2="{_L}" '
                     f'y2="{py:.2f}" stroke="#444"/>')
        parts.append(f'<text x="{_L - 8}" y="{py + 4:.2f}" font-size="11" '
                     f'text-anchor="end">{vy:.2f}</text>')

    fit_a, fit_b = slope * x.min() + intercept, slope * x.max() + intercept
    parts.append(f'<line x1="{sx(x.min()):.2f}" y1="{sy(fit_a):.2f}" '
                 f'x2="{sx(x.max()):.2f}" y2="{sy(fit_b):.2f}" '
                 f'stroke="steelblue" stroke-width="1.5"/>')
    ref_a, ref_b = y[0], y[0] + theory * (x.max() - x[0])
    parts.append(f'<line x1="{sx(x[0]):.2f}" y1="{sy(ref_a):.2f}" '
                 f'x2="{sx(x.max()):.2f}" y2="{sy(ref_b):.2f}" '
                 f'stroke="#888" stroke-width="1.2" '
                 f'stroke-dasharray="6,4"/>')
    for px, py in zip(x, y):
        parts.append(f'<circle cx="{sx(px):.2f}" cy="{sy(py):.2f}" r="3.5" '
                     f'fill="#222"/>')

    parts.append(f'<text x="{_W - _R - 6}" y="{_T + 16}" font-size="12" '
                 f'text-anchor="end" fill="steelblue">'
                 f'fit: {slope:.3f}</text>')
    parts.append(f'<text x="{_W - _R - 6}" y="{_T + 32}" font-size="12" '
                 f'text-anchor="end" fill="#666">theory: {theory:.3f}</text>')
    parts.append(f'<text x="{(_L + _W - _R) / 2:.2f}" y="{_H - 16}" '
                 f'font-size="13" text-anchor="middle">ln T</text>')
    parts.append(f'<text x="18" y="{(_T + _H - _B) / 2:.2f}" font-size="13" '
                 f'text-anchor="middle" transform="rotate(-90 18 '
                 f'{(_T + _H - _B) / 2:.2f})">ln mean {column}</text>')
    if title:
        parts.append(f'<text x="{(_L + _W - _R) / 2:.2f}" y="16" '
                     f'font-size="13" text-anchor="middle">{title}</text>')
    parts.append('</svg>')

    svg = "\n".join(parts) + "\n"
    with open(path, "w", newline="") as fh:
        fh.write(svg)
    return svg
