"""Minimal static SVG log-log plot writer (no plotting dependency).

Produces a deterministic byte-for-byte output for fixed input: points,
a least-squares power-law fit line, decade ticks, and a slope label.
"""

from __future__ import annotations

import math

_WIDTH, _HEIGHT = 480, 360
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 64, 20, 36, 48


def _fit_slope(hs, errs):
    """Least-squares slope of log(err) vs log(h)."""
    lx = [math.log(h) for h in hs]
    ly = [math.log(e) for e in errs]
    n = len(lx)
    mx = sum(lx) / n
    my = sum(ly) / n
    sxx = sum((x - mx) ** 2 for x in lx)
    sxy = sum((x - mx) * (y - my) for x, y in zip(lx, ly))
    slope = sxy / sxx
    intercept = my - slope * mx
    return slope, intercept


def _decades(lo, hi):
    start = math.floor(math.log10(lo))
    stop = math.ceil(math.log10(hi))
    return [10.0 ** k for k in range(start, stop + 1)]


def loglog_svg(hs, errs, title="convergence",
               xlabel="h", ylabel="max error") -> str:
    """Log-log scatter of (h, err) with fitted power-law line and slope."""
    if len(hs) < 2 or any(e <= 0 for e in errs) or any(h <= 0 for h in hs):
        raise ValueError("need >= 2 points with positive coordinates")
    slope, intercept = _fit_slope(hs, errs)

    xt = _decades(min(hs), max(hs))
    yt = _decades(min(errs), max(errs))
    x0, x1 = math.log10(xt[0]), math.log10(xt[-1])
    y0, y1 = math.log10(yt[0]), math.log10(yt[-1])
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0
    pw = _WIDTH - _MARGIN_L - _MARGIN_R
    ph = _HEIGHT - _MARGIN_T - _MARGIN_B

    def px(h):
        return _MARGIN_L + (math.log10(h) - x0) / (x1 - x0) * pw

    def py(e):
        return _MARGIN_T + (y1 - math.log10(e)) / (y1 - y0) * ph

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" '
        f'height="{_HEIGHT}" viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<text x="{_WIDTH // 2}" y="20" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{title}</text>',
    ]
    # axes box
    parts.append(
        f'<rect x="{_MARGIN_L}" y="{_MARGIN_T}" width="{pw}" height="{ph}" '
        f'fill="none" stroke="black" stroke-width="1"/>')
    # ticks and grid
    for h in xt:
        x = px(h)
        parts.append(f'<line x1="{x:.2f}" y1="{_MARGIN_T}" x2="{x:.2f}" '
                     f'y2="{_MARGIN_T + ph}" stroke="#dddddd"/>')
        parts.append(f'<text x="{x:.2f}" y="{_MARGIN_T + ph + 16}" '
                     f'text-anchor="middle" font-family="sans-serif" '
                     f'font-size="11">1e{int(math.log10(h))}</text>')
    for e in yt:
        y = py(e)
        parts.append(f'<line x1="{_MARGIN_L}" y1="{y:.2f}" '
                     f'x2="{_MARGIN_L + pw}" y2="{y:.2f}" stroke="#dddddd"/>')
        parts.append(f'<text x="{_MARGIN_L - 6}" y="{y:.2f}" '
                     f'text-anchor="end" dominant-baseline="middle" '
                     f'font-family="sans-serif" '
                     f'font-size="11">1e{int(math.log10(e))}</text>')
    # fitted line across the h range
    hf0, hf1 = min(hs), max(hs)
    ef0 = math.exp(intercept + slope * math.log(hf0))
    ef1 = math.exp(intercept + slope * math.log(hf1))
    parts.append(f'<line x1="{px(hf0):.2f}" y1="{py(ef0):.2f}" '
                 f'x2="{px(hf1):.2f}" y2="{py(ef1):.2f}" '
                 f'stroke="#888888" stroke-dasharray="5,3"/>')
    # data points
    for h, e in zip(hs, errs):
        parts.append(f'<circle cx="{px(h):.2f}" cy="{py(e):.2f}" r="4" '
                     f'fill="black"/>')
    # labels
    parts.append(f'<text x="{_MARGIN_L + pw // 2}" y="{_HEIGHT - 8}" '
                 f'text-anchor="middle" font-family="sans-serif" '
                 f'font-size="12">{xlabel}</text>')
    parts.append(f'<text x="16" y="{_MARGIN_T + ph // 2}" '
                 f'text-anchor="middle" font-family="sans-serif" '
                 f'font-size="12" transform="rotate(-90 16 '
                 f'{_MARGIN_T + ph // 2})">{ylabel}</text>')
    parts.append(f'<text x="{_MARGIN_L + 10}" y="{_MARGIN_T + 18}" '
                 f'font-family="sans-serif" font-size="12">'
                 f'fitted slope = {slope:.3f}</text>')
    parts.append('</svg>')
    return "\n".join(parts) + "\n"
