"""Log-log SVG chart of a sweep, written by hand (no plotting dependency)."""
from __future__ import annotations

import math

WIDTH, HEIGHT, PAD = 640, 480, 70
COLORS = {"mean": "#1f77b4", "min": "#2ca02c", "max": "#d62728", "reference": "#555555"}


def _log_ticks(lo: float, hi: float) -> list[float]:
    ticks = []
    for e in range(math.floor(math.log10(lo)), math.ceil(math.log10(hi)) + 1):
        for m in (1, 2, 5):
            v = m * 10.0**e
            if lo <= v <= hi:
                ticks.append(v)
    return ticks or [lo, hi]


def _fmt(v: float) -> str:
    return f"{v:g}"


def sweep_svg(result) -> str:
    """Mean, min and max critical radius against n on log-log axes, plus a
    reference line of slope ``-1/d`` through the centre of the mean curve."""
    levels = [s for s in result.levels if s.mean is not None]
    if not levels:
        raise ValueError("no complete levels to plot")
    d = result.config.d
    ns = [s.n for s in levels]
    ys = [v for s in levels for v in (s.min, s.max)]
    xlo, xhi = math.log10(min(ns)), math.log10(max(ns))
    ylo, yhi = math.log10(min(ys)), math.log10(max(ys))
    if xhi == xlo:
        xlo, xhi = xlo - 0.5, xhi + 0.5
    pad_y = max(0.05 * (yhi - ylo), 0.02)
    ylo, yhi = ylo - pad_y, yhi + pad_y

    def sx(n):
        return PAD + (math.log10(n) - xlo) / (xhi - xlo) * (WIDTH - 2 * PAD)

    def sy(r):
        return HEIGHT - PAD - (math.log10(r) - ylo) / (yhi - ylo) * (HEIGHT - 2 * PAD)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
           f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
           f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
           f'<text x="{WIDTH / 2}" y="24" text-anchor="middle" font-size="14">'
           f'Critical radius, d = {d}</text>',
           f'<g class="axes" stroke="black">'
           f'<line x1="{PAD}" y1="{HEIGHT - PAD}" x2="{WIDTH - PAD}" y2="{HEIGHT - PAD}"/>'
           f'<line x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{HEIGHT - PAD}"/></g>']
    for t in _log_ticks(10**xlo, 10**xhi):
        x = sx(t)
        out.append(f'<line class="tick" x1="{x:.2f}" y1="{HEIGHT - PAD}" x2="{x:.2f}" '
                   f'y2="{HEIGHT - PAD + 5}" stroke="black"/>'
                   f'<text x="{x:.2f}" y="{HEIGHT - PAD + 18}" text-anchor="middle">{_fmt(t)}</text>')
    for t in _log_ticks(10**ylo, 10**yhi):
        y = sy(t)
        out.append(f'<line class="tick" x1="{PAD - 5}" y1="{y:.2f}" x2="{PAD}" y2="{y:.2f}" '
                   f'stroke="black"/>'
                   f'<text x="{PAD - 8}" y="{y + 4:.2f}" text-anchor="end">{_fmt(t)}</text>')
    out.append(f'<text x="{WIDTH / 2}" y="{HEIGHT - 20}" text-anchor="middle">n (log scale)</text>')
    out.append(f'<text x="18" y="{HEIGHT / 2}" text-anchor="middle" '
               f'transform="rotate(-90 18 {HEIGHT / 2})">critical radius (log scale)</text>')

    for key in ("mean", "min", "max"):
        pts = " ".join(f"{sx(s.n):.2f},{sy(getattr(s, key)):.2f}" for s in levels)
        out.append(f'<polyline class="curve {key}" fill="none" stroke="{COLORS[key]}" '
                   f'stroke-width="2" points="{pts}"/>')

    # reference C * n^(-1/d) through the geometric centre of the mean curve
    lx = sum(math.log10(s.n) for s in levels) / len(levels)
    ly = sum(math.log10(s.mean) for s in levels) / len(levels)
    ref = [(10**x, 10 ** (ly - (x - lx) / d)) for x in (xlo, xhi)]
    out.append(f'<line class="reference" x1="{sx(ref[0][0]):.2f}" y1="{sy(ref[0][1]):.2f}" '
               f'x2="{sx(ref[1][0]):.2f}" y2="{sy(ref[1][1]):.2f}" stroke="{COLORS["reference"]}" '
               f'stroke-dasharray="6 4" stroke-width="1.5"/>')

    legend = [("mean", "mean"), ("max", "maximum"), ("min", "minimum"),
              ("reference", f"C n^(-1/{d})")]
    for i, (key, label) in enumerate(legend):
        y = PAD + 10 + 18 * i
        x = WIDTH - PAD - 130
        dash = ' stroke-dasharray="6 4"' if key == "reference" else ""
        out.append(f'<line x1="{x}" y1="{y}" x2="{x + 24}" y2="{y}" stroke="{COLORS[key]}" '
                   f'stroke-width="2"{dash}/><text x="{x + 30}" y="{y + 4}">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
