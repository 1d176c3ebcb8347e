"""Deterministic SVG and ASCII plots of payoff functions."""

from __future__ import annotations

from fractions import Fraction

from . import plf
from .errors import InvalidInputError
from .plf import PiecewisePayoff, format_rational

HALF = Fraction(1, 2)


def _vertices(f: PiecewisePayoff, lo: Fraction, hi: Fraction) -> list[tuple[Fraction, Fraction]]:
    xs = [lo] + [Fraction(n) for n, _ in plf.breakpoints(f) if lo < n < hi] + [hi]
    return [(x, plf.evaluate(f, x)) for x in xs]


def _check_range(lo: Fraction, hi: Fraction) -> None:
    if not lo < hi:
        raise InvalidInputError(f"empty plot range [{lo}, {hi}]")


def ascii_plot(
    f: PiecewisePayoff,
    lo,
    hi,
    overlay: PiecewisePayoff | None = None,
    title: str = "",
) -> str:
    """One column per half unit of N, one row per half unit of value.

    The curve is drawn with ``*``; an overlay is drawn with ``o`` where it
    differs from the curve.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    _check_range(lo, hi)
    xs = []
    x = lo
    while x <= hi:
        xs.append(x)
        x += HALF
    ys = [plf.evaluate(f, x) for x in xs]
    ov = [plf.evaluate(overlay, x) for x in xs] if overlay is not None else None
    allv = ys + (ov or []) + [Fraction(0)]
    top = _ceil_half(max(allv))
    bottom = _floor_half(min(allv))

    rows = []
    y = top
    while y >= bottom:
        cells = []
        for j, x in enumerate(xs):
            ch = " "
            if x == 0 and y == 0:
                ch = "+"
            elif x == 0:
                ch = "|"
            elif y == 0:
                ch = "-"
            if ov is not None and ov[j] == y and ys[j] != y:
                ch = "o"
            if ys[j] == y:
                ch = "*"
            cells.append(ch)
        label = format_rational(y) if y.denominator == 1 else ""
        rows.append(f"{label:>5} {''.join(cells).rstrip()}")
        y -= HALF

    axis = [" "] * (len(xs) + 6)
    for j, x in enumerate(xs):
        if x.denominator == 1 and x % 2 == 0:
            text = format_rational(x)
            start = 6 + j - len(text) // 2
            if start >= 6 and all(c == " " for c in axis[start - 1 : start + len(text) + 1]):
                axis[start : start + len(text)] = text
    out = [title] if title else []
    out += rows
    out.append("".join(axis).rstrip())
    out.append(f"{'N':>5} from {format_rational(lo)} to {format_rational(hi)}, 2 columns per unit")
    return "\n".join(out) + "\n"


def _ceil_half(v: Fraction) -> Fraction:
    return Fraction(-((-v * 2) // 1), 2)


def _floor_half(v: Fraction) -> Fraction:
    return Fraction((v * 2) // 1, 2)


WIDTH, HEIGHT, MARGIN = 640, 400, 48


def svg_plot(
    f: PiecewisePayoff,
    lo,
    hi,
    overlay: PiecewisePayoff | None = None,
    title: str = "",
) -> str:
    """Render ``f`` on ``[lo, hi]`` as a standalone SVG document.

    Output depends only on the arguments, so identical calls produce
    identical bytes.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    _check_range(lo, hi)
    verts = _vertices(f, lo, hi)
    over = _vertices(overlay, lo, hi) if overlay is not None else []
    values = [v for _, v in verts + over] + [Fraction(0)]
    ymin, ymax = min(values) - 1, max(values) + 1
    pw, ph = WIDTH - 2 * MARGIN, HEIGHT - 2 * MARGIN

    def sx(x) -> str:
        return f"{MARGIN + float((x - lo) / (hi - lo)) * pw:.2f}"

    def sy(y) -> str:
        return f"{MARGIN + float((ymax - y) / (ymax - ymin)) * ph:.2f}"

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="monospace" font-size="11">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{WIDTH // 2}" y="20" text-anchor="middle" font-size="14">{_esc(title)}</text>')

    # integer gridlines, N=0 emphasized
    first = -((-lo) // 1)
    for n in range(int(first), int(hi // 1) + 1):
        color, width = ("#444", "1.5") if n == 0 else ("#ddd", "1")
        out.append(f'<line x1="{sx(n)}" y1="{MARGIN}" x2="{sx(n)}" y2="{HEIGHT - MARGIN}" stroke="{color}" stroke-width="{width}"/>')
        out.append(f'<text x="{sx(n)}" y="{HEIGHT - MARGIN + 14}" text-anchor="middle">{n}</text>')
    for n in range(int(-((-ymin) // 1)), int(ymax // 1) + 1):
        color = "#444" if n == 0 else "#eee"
        out.append(f'<line x1="{MARGIN}" y1="{sy(n)}" x2="{WIDTH - MARGIN}" y2="{sy(n)}" stroke="{color}" stroke-width="1"/>')
        out.append(f'<text x="{MARGIN - 6}" y="{sy(n)}" text-anchor="end" dominant-baseline="middle">{n}</text>')
    out.append(f'<text x="{WIDTH - MARGIN + 8}" y="{HEIGHT - MARGIN + 14}">N</text>')

    if over:
        pts = " ".join(f"{sx(x)},{sy(y)}" for x, y in over)
        out.append(f'<polyline class="overlay" points="{pts}" fill="none" stroke="#d62728" stroke-width="2" stroke-dasharray="6,4"/>')
    pts = " ".join(f"{sx(x)},{sy(y)}" for x, y in verts)
    out.append(f'<polyline class="payoff" points="{pts}" fill="none" stroke="#1f77b4" stroke-width="2.5"/>')

    # label local extrema (breakpoints)
    for n, v in plf.breakpoints(f):
        if lo <= n <= hi:
            out.append(f'<circle cx="{sx(n)}" cy="{sy(v)}" r="3" fill="#1f77b4"/>')
            dy = "-8" if _is_peak(f, n) else "16"
            out.append(f'<text x="{sx(n)}" y="{sy(v)}" dy="{dy}" text-anchor="middle">({n},{v})</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _is_peak(f: PiecewisePayoff, n: int) -> bool:
    return f.at(n) > f.at(n - 1)


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
