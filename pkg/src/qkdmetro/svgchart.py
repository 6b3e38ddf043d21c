"""Self-contained dual-axis SVG chart of a sweep (no plotting dependency).

QBER on the left (linear) axis, distillation-stage rates on the right
(log) axis, fixed 800x600 canvas.
"""

import math

WIDTH, HEIGHT = 800, 600
MARGIN = dict(left=70, right=80, top=40, bottom=50)

_RATE_SERIES = (
    ("raw_bps", "#888888", "raw"),
    ("sifted_bps", "#4477aa", "sifted"),
    ("ec_corrected_bps", "#228833", "corrected"),
    ("secret_bps", "#aa3377", "secret"),
)


def _x(length, lo, hi):
    span = (hi - lo) or 1.0
    return MARGIN["left"] + (length - lo) / span * (WIDTH - MARGIN["left"] - MARGIN["right"])


def _y_linear(v, lo, hi):
    span = (hi - lo) or 1.0
    return HEIGHT - MARGIN["bottom"] - (v - lo) / span * (HEIGHT - MARGIN["top"] - MARGIN["bottom"])


def sweep_svg(records, title="QKD link sweep"):
    """SVG text for a list of SweepRecords."""
    if not records:
        raise ValueError("nothing to plot")
    lo = records[0].length_km
    hi = records[-1].length_km
    qber_max = max(0.12, max(r.qber for r in records) * 1.1)
    rates = [getattr(r, name) for r in records for name, _, _ in _RATE_SERIES
             if getattr(r, name) > 0]
    log_hi = math.ceil(math.log10(max(rates))) if rates else 1
    log_lo = log_hi - 6

    def y_rate(v):
        clipped = max(v, 10.0 ** log_lo)
        return _y_linear(math.log10(clipped), log_lo, log_hi)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2}" y="24" text-anchor="middle" font-size="16">{title}</text>',
    ]
    # axes
    x0, x1 = MARGIN["left"], WIDTH - MARGIN["right"]
    y0, y1 = HEIGHT - MARGIN["bottom"], MARGIN["top"]
    parts.append(f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>')
    parts.append(f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>')
    parts.append(f'<line x1="{x1}" y1="{y0}" x2="{x1}" y2="{y1}" stroke="black"/>')
    for i in range(5):
        frac = i / 4
        x = x0 + frac * (x1 - x0)
        km = lo + frac * (hi - lo)
        parts.append(f'<text x="{x}" y="{y0 + 18}" text-anchor="middle">{km:.1f}</text>')
        q = frac * qber_max
        y = _y_linear(q, 0, qber_max)
        parts.append(f'<text x="{x0 - 8}" y="{y + 4}" text-anchor="end">{100 * q:.1f}%</text>')
    for d in range(log_lo, log_hi + 1):
        y = _y_linear(d, log_lo, log_hi)
        parts.append(f'<text x="{x1 + 8}" y="{y + 4}">1e{d}</text>')
    parts.append(
        f'<text x="18" y="{(y0 + y1) / 2}" transform="rotate(-90 18 {(y0 + y1) / 2})" '
        f'text-anchor="middle">QBER</text>')
    parts.append(
        f'<text x="{WIDTH - 14}" y="{(y0 + y1) / 2}" '
        f'transform="rotate(90 {WIDTH - 14} {(y0 + y1) / 2})" '
        f'text-anchor="middle">rate (bit/s)</text>')

    def polyline(points, color, dashed=False):
        pts = " ".join(f"{x:.1f},{y:.1f}" for x, y in points)
        dash = ' stroke-dasharray="6 3"' if dashed else ""
        return f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>'

    parts.append(polyline(
        [(_x(r.length_km, lo, hi), _y_linear(r.qber, 0, qber_max)) for r in records],
        "#cc3311", dashed=True))
    for name, color, _ in _RATE_SERIES:
        parts.append(polyline(
            [(_x(r.length_km, lo, hi), y_rate(getattr(r, name))) for r in records],
            color))

    legend_y = MARGIN["top"] + 8
    entries = [("QBER", "#cc3311")] + [(label, color) for _, color, label in _RATE_SERIES]
    for i, (label, color) in enumerate(entries):
        y = legend_y + 16 * i
        parts.append(f'<line x1="{x0 + 10}" y1="{y}" x2="{x0 + 34}" y2="{y}" '
                     f'stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{x0 + 40}" y="{y + 4}">{label}</text>')
    parts.append("</svg>")
    return "\n".join(parts)
