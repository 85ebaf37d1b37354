"""Deterministic SVG line charts from CSV tables.

The renderer is a pure function of the parsed CSV contents and the
styling flags: fixed viewport, fixed palette, fixed number formatting, no
timestamps or generated ids.  Re-rendering the same CSV must produce
byte-identical output, which is what keeps golden-file comparisons
meaningful.
"""

from __future__ import annotations

import csv
import math

import numpy as np

from .errors import ParseError

__all__ = ["read_table", "line_chart", "render_csv_chart"]

_WIDTH, _HEIGHT = 880.0, 560.0
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 90.0, 180.0, 50.0, 70.0
_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"]


def read_table(source) -> tuple[list, np.ndarray]:
    """Read a numeric wide-format CSV: header row, then float columns.

    Empty cells and non-numeric markers become NaN so curves with
    unsupported points simply break.
    """
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source, "r", encoding="utf-8", newline="") as handle:
            return read_table(handle)
    reader = csv.reader(source)
    header = next(reader, None)
    if not header:
        raise ParseError("chart input has no header row", 1)
    rows = []
    for row in reader:
        if not row or all(not c.strip() for c in row):
            continue
        vals = []
        for cell in row:
            try:
                vals.append(float(cell))
            except ValueError:
                vals.append(math.nan)
        vals += [math.nan] * (len(header) - len(vals))
        rows.append(vals[: len(header)])
    return [h.strip() for h in header], np.array(rows, dtype=float)


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _tick_label(v: float) -> str:
    return f"{v:.3g}"


class _Scale:
    def __init__(self, lo: float, hi: float, out_lo: float, out_hi: float, log: bool):
        self.log = log
        if log:
            lo, hi = math.log10(lo), math.log10(hi)
        if hi <= lo:
            hi = lo + 1.0
        self.lo, self.hi = lo, hi
        self.out_lo, self.out_hi = out_lo, out_hi

    def __call__(self, v: float) -> float:
        x = math.log10(v) if self.log else v
        frac = (x - self.lo) / (self.hi - self.lo)
        return self.out_lo + frac * (self.out_hi - self.out_lo)

    def ticks(self) -> list:
        if self.log:
            lo_d = math.ceil(self.lo - 1e-9)
            hi_d = math.floor(self.hi + 1e-9)
            decades = range(lo_d, hi_d + 1)
            step = max(1, (hi_d - lo_d) // 8)
            return [10.0**d for d in decades][::step] if hi_d >= lo_d else []
        return list(np.linspace(self.lo, self.hi, 5))


def line_chart(
    header: list,
    data: np.ndarray,
    title: str = "",
    x_label: str = "",
    y_label: str = "",
    logx: bool = False,
    logy: bool = False,
    vlines: tuple = (),
    hlines: tuple = (),
) -> str:
    """Render column 0 against each remaining column as one SVG string.

    ``vlines``/``hlines`` are ``(value, label)`` pairs drawn as dashed
    reference lines.  Non-finite points break the polyline.
    """
    if data.ndim != 2 or data.shape[1] < 2:
        raise ParseError("chart needs at least two columns")
    x = data[:, 0]
    series = [(header[i], data[:, i]) for i in range(1, data.shape[1])]

    def finite(v, log):
        return np.isfinite(v) & ((v > 0) if log else True)

    x_ok = finite(x, logx)
    ys = np.concatenate([s[1][x_ok & finite(s[1], logy)] for s in series] or [np.array([1.0])])
    ref_x = [v for v, _ in vlines]
    ref_y = [v for v, _ in hlines]
    if ys.size == 0:
        ys = np.array([1.0])
    x_lo = min(float(x[x_ok].min()), *(ref_x or [math.inf]))
    x_hi = max(float(x[x_ok].max()), *(ref_x or [-math.inf]))
    y_lo = min(float(ys.min()), *(ref_y or [math.inf]))
    y_hi = max(float(ys.max()), *(ref_y or [-math.inf]))
    if not logy:
        pad = 0.05 * (y_hi - y_lo or 1.0)
        y_lo, y_hi = y_lo - pad, y_hi + pad
    else:
        y_lo, y_hi = y_lo / 1.3, y_hi * 1.3
    sx = _Scale(x_lo, x_hi, _MARGIN_L, _WIDTH - _MARGIN_R, logx)
    sy = _Scale(y_lo, y_hi, _HEIGHT - _MARGIN_B, _MARGIN_T, logy)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{int(_WIDTH)}" '
        f'height="{int(_HEIGHT)}" viewBox="0 0 {int(_WIDTH)} {int(_HEIGHT)}">',
        f'<rect width="{int(_WIDTH)}" height="{int(_HEIGHT)}" fill="white"/>',
        f'<text x="{_fmt(_WIDTH / 2)}" y="28" text-anchor="middle" '
        f'font-family="sans-serif" font-size="16">{_esc(title)}</text>',
    ]
    # Axes frame and ticks
    parts.append(
        f'<rect x="{_fmt(_MARGIN_L)}" y="{_fmt(_MARGIN_T)}" '
        f'width="{_fmt(_WIDTH - _MARGIN_L - _MARGIN_R)}" '
        f'height="{_fmt(_HEIGHT - _MARGIN_T - _MARGIN_B)}" fill="none" stroke="#333"/>'
    )
    for tv in sx.ticks():
        tx = sx(tv)
        parts.append(
            f'<line x1="{_fmt(tx)}" y1="{_fmt(_HEIGHT - _MARGIN_B)}" x2="{_fmt(tx)}" '
            f'y2="{_fmt(_MARGIN_T)}" stroke="#ddd"/>'
        )
        parts.append(
            f'<text x="{_fmt(tx)}" y="{_fmt(_HEIGHT - _MARGIN_B + 18)}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{_tick_label(tv)}</text>'
        )
    for tv in sy.ticks():
        ty = sy(tv)
        parts.append(
            f'<line x1="{_fmt(_MARGIN_L)}" y1="{_fmt(ty)}" x2="{_fmt(_WIDTH - _MARGIN_R)}" '
            f'y2="{_fmt(ty)}" stroke="#ddd"/>'
        )
        parts.append(
            f'<text x="{_fmt(_MARGIN_L - 6)}" y="{_fmt(ty + 4)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{_tick_label(tv)}</text>'
        )
    parts.append(
        f'<text x="{_fmt((_MARGIN_L + _WIDTH - _MARGIN_R) / 2)}" y="{_fmt(_HEIGHT - 20)}" '
        f'text-anchor="middle" font-family="sans-serif" font-size="13">{_esc(x_label)}</text>'
    )
    parts.append(
        f'<text x="22" y="{_fmt((_MARGIN_T + _HEIGHT - _MARGIN_B) / 2)}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13" transform="rotate(-90 22 '
        f'{_fmt((_MARGIN_T + _HEIGHT - _MARGIN_B) / 2)})">{_esc(y_label)}</text>'
    )
    # Reference lines
    for v, label in vlines:
        px = sx(v)
        parts.append(
            f'<line x1="{_fmt(px)}" y1="{_fmt(_MARGIN_T)}" x2="{_fmt(px)}" '
            f'y2="{_fmt(_HEIGHT - _MARGIN_B)}" stroke="#888" stroke-dasharray="6,4"/>'
        )
        parts.append(
            f'<text x="{_fmt(px + 4)}" y="{_fmt(_MARGIN_T + 14)}" font-family="sans-serif" '
            f'font-size="11" fill="#555">{_esc(label)}</text>'
        )
    for v, label in hlines:
        py = sy(v)
        parts.append(
            f'<line x1="{_fmt(_MARGIN_L)}" y1="{_fmt(py)}" x2="{_fmt(_WIDTH - _MARGIN_R)}" '
            f'y2="{_fmt(py)}" stroke="#888" stroke-dasharray="6,4"/>'
        )
        parts.append(
            f'<text x="{_fmt(_WIDTH - _MARGIN_R - 4)}" y="{_fmt(py - 5)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11" fill="#555">{_esc(label)}</text>'
        )
    # Series
    for idx, (name, y) in enumerate(series):
        color = _PALETTE[idx % len(_PALETTE)]
        ok = x_ok & finite(y, logy) & finite(y, False)
        pts = []
        segments = []
        for xi, yi, good in zip(x, y, ok):
            if good:
                pts.append(f"{_fmt(sx(xi))},{_fmt(sy(yi))}")
            elif pts:
                segments.append(pts)
                pts = []
        if pts:
            segments.append(pts)
        for seg in segments:
            if len(seg) == 1:
                cx, cy = seg[0].split(",")
                parts.append(f'<circle cx="{cx}" cy="{cy}" r="3" fill="{color}"/>')
            else:
                parts.append(
                    f'<polyline points="{" ".join(seg)}" fill="none" stroke="{color}" '
                    f'stroke-width="1.6"/>'
                )
        ly = _MARGIN_T + 16 + 18 * idx
        lx = _WIDTH - _MARGIN_R + 12
        parts.append(
            f'<line x1="{_fmt(lx)}" y1="{_fmt(ly - 4)}" x2="{_fmt(lx + 22)}" '
            f'y2="{_fmt(ly - 4)}" stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{_fmt(lx + 27)}" y="{_fmt(ly)}" font-family="sans-serif" '
            f'font-size="12">{_esc(name)}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _esc(text: str) -> str:
    return (
        str(text)
        .replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def render_csv_chart(csv_path, svg_path, **options) -> None:
    """Read a wide CSV and write its chart; pure function of file + options."""
    header, data = read_table(csv_path)
    svg = line_chart(header, data, **options)
    with open(svg_path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(svg)
