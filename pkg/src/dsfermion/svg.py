"""Minimal self-contained SVG emission for the run outputs.

Hand-rolled rather than delegated to a plotting library so that output files
are byte-stable across runs and machines (no embedded timestamps, font
metrics or generated ids).  Numbers are formatted with fixed precision.

The heatmap uses a fixed five-anchor approximation of the viridis color map,
linearly interpolated in RGB:
    0.00 -> (68, 1, 84)     0.25 -> (59, 82, 139)    0.50 -> (33, 145, 140)
    0.75 -> (94, 201, 98)   1.00 -> (253, 231, 37)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

WIDTH = 640
HEIGHT = 440
MARGIN_LEFT = 72
MARGIN_RIGHT = 24
MARGIN_TOP = 48
MARGIN_BOTTOM = 56

LINE_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")

_VIRIDIS_ANCHORS = (
    (0.00, (68, 1, 84)),
    (0.25, (59, 82, 139)),
    (0.50, (33, 145, 140)),
    (0.75, (94, 201, 98)),
    (1.00, (253, 231, 37)),
)


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _fmt_tick(x: float) -> str:
    return f"{x:.4g}"


def viridis(v: float) -> str:
    """Hex color for v in [0, 1] from the fixed anchor gradient."""
    v = min(max(v, 0.0), 1.0)
    for (v0, c0), (v1, c1) in zip(_VIRIDIS_ANCHORS, _VIRIDIS_ANCHORS[1:]):
        if v <= v1:
            f = 0.0 if v1 == v0 else (v - v0) / (v1 - v0)
            rgb = tuple(round(a + f * (b - a)) for a, b in zip(c0, c1))
            return "#{:02x}{:02x}{:02x}".format(*rgb)
    return "#fde725"  # pragma: no cover


def _nice_ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    for mult in (1, 2, 2.5, 5, 10):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = math.ceil(lo / step) * step
    ticks = []
    value = first
    while value <= hi + 1e-12 * abs(step):
        ticks.append(round(value, 12))
        value += step
    return ticks


@dataclass
class Series:
    label: str
    xs: list[float]
    ys: list[float]
    yerr: list[float] | None = None


@dataclass
class _Canvas:
    meta: str | None = None
    parts: list[str] = field(default_factory=list)

    def add(self, element: str) -> None:
        self.parts.append(element)

    def text(self, x, y, content, size=12, anchor="middle", rotate=None) -> None:
        transform = f' transform="rotate(-90 {_fmt(x)} {_fmt(y)})"' if rotate else ""
        self.add(
            f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-size="{size}" '
            f'font-family="sans-serif" text-anchor="{anchor}"{transform}>{content}</text>'
        )

    def render(self) -> str:
        body = "\n".join(self.parts)
        comment = ""
        if self.meta:
            # XML comments must not contain "--".
            comment = f"<!-- {self.meta.replace('--', '=')} -->\n"
        return (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
            f'viewBox="0 0 {WIDTH} {HEIGHT}">\n'
            f"{comment}"
            f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>\n'
            f"{body}\n</svg>\n"
        )


def _frame(canvas: _Canvas, title: str, xlabel: str, ylabel: str) -> None:
    x0, y0 = MARGIN_LEFT, HEIGHT - MARGIN_BOTTOM
    x1, y1 = WIDTH - MARGIN_RIGHT, MARGIN_TOP
    canvas.add(
        f'<rect x="{x0}" y="{y1}" width="{x1 - x0}" height="{y0 - y1}" '
        f'fill="none" stroke="black" stroke-width="1"/>'
    )
    canvas.text(WIDTH / 2, MARGIN_TOP - 20, title, size=15)
    canvas.text(WIDTH / 2, HEIGHT - 14, xlabel)
    canvas.text(20, HEIGHT / 2, ylabel, rotate=True)


def _scales(xlo, xhi, ylo, yhi):
    if xhi <= xlo:
        xhi = xlo + 1.0
    if yhi <= ylo:
        pad = max(abs(ylo), 1.0) * 1e-3
        ylo, yhi = ylo - pad, yhi + pad

    def sx(x):
        return MARGIN_LEFT + (x - xlo) / (xhi - xlo) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)

    def sy(y):
        return (HEIGHT - MARGIN_BOTTOM) - (y - ylo) / (yhi - ylo) * (
            HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
        )

    return sx, sy, xlo, xhi, ylo, yhi


def line_chart(
    title: str, xlabel: str, ylabel: str, series: list[Series], meta: str | None = None
) -> str:
    """A line chart with optional per-point error bars; axes auto-scale."""
    xs_all = [x for s in series for x in s.xs]
    ys_all = []
    for s in series:
        for i, y in enumerate(s.ys):
            err = s.yerr[i] if s.yerr else 0.0
            ys_all.extend((y - err, y + err))
    xlo, xhi = min(xs_all), max(xs_all)
    ylo, yhi = min(ys_all), max(ys_all)
    span = (yhi - ylo) or max(abs(ylo), 1.0) * 1e-3
    ylo, yhi = ylo - 0.05 * span, yhi + 0.05 * span

    canvas = _Canvas(meta=meta)
    sx, sy, xlo, xhi, ylo, yhi = _scales(xlo, xhi, ylo, yhi)
    for tick in _nice_ticks(xlo, xhi):
        px = sx(tick)
        canvas.add(
            f'<line x1="{_fmt(px)}" y1="{HEIGHT - MARGIN_BOTTOM}" x2="{_fmt(px)}" '
            f'y2="{HEIGHT - MARGIN_BOTTOM + 5}" stroke="black"/>'
        )
        canvas.text(px, HEIGHT - MARGIN_BOTTOM + 20, _fmt_tick(tick), size=11)
    for tick in _nice_ticks(ylo, yhi):
        py = sy(tick)
        canvas.add(
            f'<line x1="{MARGIN_LEFT - 5}" y1="{_fmt(py)}" x2="{MARGIN_LEFT}" '
            f'y2="{_fmt(py)}" stroke="black"/>'
        )
        canvas.text(MARGIN_LEFT - 9, py + 4, _fmt_tick(tick), size=11, anchor="end")

    for idx, s in enumerate(series):
        color = LINE_COLORS[idx % len(LINE_COLORS)]
        points = " ".join(f"{_fmt(sx(x))},{_fmt(sy(y))}" for x, y in zip(s.xs, s.ys))
        canvas.add(
            f'<polyline points="{points}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        for i, (x, y) in enumerate(zip(s.xs, s.ys)):
            px, py = sx(x), sy(y)
            canvas.add(f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="2.5" fill="{color}"/>')
            if s.yerr and s.yerr[i] > 0:
                lo, hi = sy(y - s.yerr[i]), sy(y + s.yerr[i])
                canvas.add(
                    f'<line x1="{_fmt(px)}" y1="{_fmt(lo)}" x2="{_fmt(px)}" '
                    f'y2="{_fmt(hi)}" stroke="{color}" stroke-width="1"/>'
                )
        canvas.text(
            WIDTH - MARGIN_RIGHT - 8,
            MARGIN_TOP + 16 + 16 * idx,
            s.label,
            size=11,
            anchor="end",
        )
        canvas.add(
            f'<line x1="{WIDTH - MARGIN_RIGHT - 90}" y1="{MARGIN_TOP + 12 + 16 * idx}" '
            f'x2="{WIDTH - MARGIN_RIGHT - 70}" y2="{MARGIN_TOP + 12 + 16 * idx}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
    _frame(canvas, title, xlabel, ylabel)
    return canvas.render()


def heatmap(
    title: str,
    xlabel: str,
    ylabel: str,
    xs: list[float],
    ys: list[float],
    values: list[list[float]],
    meta: str | None = None,
) -> str:
    """Heatmap of values[i][j] at (xs[i], ys[j]); color range auto-scales."""
    flat = [v for row in values for v in row]
    vlo, vhi = min(flat), max(flat)
    if vhi <= vlo:
        vhi = vlo + 1.0

    canvas = _Canvas(meta=meta)
    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT - 60  # leave room for the color bar
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
    cell_w = plot_w / len(xs)
    cell_h = plot_h / len(ys)
    for i, _ in enumerate(xs):
        for j, _ in enumerate(ys):
            v = (values[i][j] - vlo) / (vhi - vlo)
            px = MARGIN_LEFT + i * cell_w
            py = HEIGHT - MARGIN_BOTTOM - (j + 1) * cell_h
            canvas.add(
                f'<rect x="{_fmt(px)}" y="{_fmt(py)}" width="{_fmt(cell_w + 0.5)}" '
                f'height="{_fmt(cell_h + 0.5)}" fill="{viridis(v)}"/>'
            )
    # Axis labels at cell centers (sparse if many).
    x_stride = max(1, len(xs) // 8)
    for i, x in enumerate(xs):
        if i % x_stride:
            continue
        px = MARGIN_LEFT + (i + 0.5) * cell_w
        canvas.text(px, HEIGHT - MARGIN_BOTTOM + 20, _fmt_tick(x), size=11)
    for j, y in enumerate(ys):
        py = HEIGHT - MARGIN_BOTTOM - (j + 0.5) * cell_h
        canvas.text(MARGIN_LEFT - 9, py + 4, _fmt_tick(y), size=11, anchor="end")

    # Color bar.
    bar_x = MARGIN_LEFT + plot_w + 16
    bar_steps = 32
    for k in range(bar_steps):
        frac = k / (bar_steps - 1)
        py = HEIGHT - MARGIN_BOTTOM - (k + 1) * plot_h / bar_steps
        canvas.add(
            f'<rect x="{bar_x}" y="{_fmt(py)}" width="16" '
            f'height="{_fmt(plot_h / bar_steps + 0.5)}" fill="{viridis(frac)}"/>'
        )
    canvas.text(bar_x + 8, HEIGHT - MARGIN_BOTTOM + 16, _fmt_tick(vlo), size=10)
    canvas.text(bar_x + 8, MARGIN_TOP - 6, _fmt_tick(vhi), size=10)

    canvas.text(WIDTH / 2, MARGIN_TOP - 20, title, size=15)
    canvas.text(MARGIN_LEFT + plot_w / 2, HEIGHT - 14, xlabel)
    canvas.text(20, HEIGHT / 2, ylabel, rotate=True)
    canvas.add(
        f'<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{_fmt(plot_w)}" '
        f'height="{plot_h}" fill="none" stroke="black"/>'
    )
    return canvas.render()
