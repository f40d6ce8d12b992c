"""Deterministic CSV and SVG artifact writers used by the command line.

The CSV writer formats floats with ``repr`` so values survive a write/read
round trip bit-for-bit; rerunning a command on the same config always
produces byte-identical files.  The SVG charts are self-contained
hand-assembled documents (no plotting dependency) intended for quick visual
inspection of sweep and trace outputs.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

__all__ = ["write_csv", "read_csv", "svg_line_chart"]

# Colorblind-safe cycle (Okabe-Ito, minus the yellow that washes out on white).
_PALETTE = (
    "#0072b2", "#d55e00", "#009e73", "#cc79a7",
    "#56b4e9", "#e69f00", "#000000",
)


def _format_cell(value) -> str:
    if isinstance(value, str):
        if "," in value or "\n" in value or '"' in value:
            raise ValueError(f"CSV cell may not contain separators: {value!r}")
        return value
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def write_csv(path: str | Path, columns: dict[str, object]) -> None:
    """Write named columns (equal-length sequences) as a CSV file."""
    names = list(columns)
    if not names:
        raise ValueError("write_csv needs at least one column")
    cols = [list(columns[name]) for name in names]
    length = len(cols[0])
    for name, col in zip(names, cols):
        if len(col) != length:
            raise ValueError(
                f"column {name!r} has length {len(col)}, expected {length}"
            )
    lines = [",".join(names)]
    for row in zip(*cols):
        lines.append(",".join(_format_cell(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_csv(path: str | Path) -> dict[str, object]:
    """Read a CSV written by :func:`write_csv`.

    Columns where every entry parses as a float come back as float arrays;
    anything else stays a list of strings.
    """
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"empty CSV file: {path}")
    names = rows[0]
    data: dict[str, object] = {}
    for j, name in enumerate(names):
        raw = [row[j] for row in rows[1:]]
        try:
            data[name] = np.array([float(v) for v in raw])
        except ValueError:
            data[name] = raw
    return data


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if not math.isfinite(lo) or not math.isfinite(hi) or hi <= lo:
        return [lo]
    span = hi - lo
    step = 10 ** math.floor(math.log10(span / count))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if span / (step * mult) <= count:
            step *= mult
            break
    first = math.ceil(lo / step) * step
    ticks = []
    value = first
    while value <= hi + 0.5 * step:
        ticks.append(0.0 if abs(value) < 1e-12 * span else value)
        value += step
    return ticks


def _tick_label(value: float) -> str:
    return f"{value:.4g}"


def svg_line_chart(
    path: str | Path,
    series: list[tuple[str, object, object]],
    *,
    title: str = "",
    x_label: str = "",
    y_label: str = "",
    width: int = 880,
    height: int = 540,
    markers: bool = False,
) -> None:
    """Render (label, x, y) series as a line chart and write an SVG file."""
    margin_l, margin_r, margin_t, margin_b = 86, 24, 46, 64
    plot_w = width - margin_l - margin_r
    plot_h = height - margin_t - margin_b

    cleaned: list[tuple[str, np.ndarray, np.ndarray]] = []
    xs_all: list[np.ndarray] = []
    ys_all: list[np.ndarray] = []
    for label, x, y in series:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if x.shape != y.shape:
            raise ValueError(f"series {label!r}: x and y lengths differ")
        cleaned.append((label, x, y))
        keep = np.isfinite(x) & np.isfinite(y)
        if keep.any():
            xs_all.append(x[keep])
            ys_all.append(y[keep])
    if not xs_all:
        raise ValueError("svg_line_chart needs at least one finite data point")
    x_lo = min(float(a.min()) for a in xs_all)
    x_hi = max(float(a.max()) for a in xs_all)
    y_lo = min(float(a.min()) for a in ys_all)
    y_hi = max(float(a.max()) for a in ys_all)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
    x_pad = 0.04 * (x_hi - x_lo)
    y_pad = 0.06 * (y_hi - y_lo)
    x_lo, x_hi = x_lo - x_pad, x_hi + x_pad
    y_lo, y_hi = y_lo - y_pad, y_hi + y_pad

    def sx(v: float) -> float:
        return margin_l + (v - x_lo) / (x_hi - x_lo) * plot_w

    def sy(v: float) -> float:
        return margin_t + (y_hi - v) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{margin_l}" y="{margin_t}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#444" stroke-width="1"/>',
    ]
    for tick in _ticks(x_lo + x_pad, x_hi - x_pad):
        px = sx(tick)
        parts.append(
            f'<line x1="{px:.2f}" y1="{margin_t}" x2="{px:.2f}" '
            f'y2="{margin_t + plot_h}" stroke="#ddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{px:.2f}" y="{margin_t + plot_h + 20}" font-size="12" '
            f'text-anchor="middle" fill="#222">{_tick_label(tick)}</text>'
        )
    for tick in _ticks(y_lo + y_pad, y_hi - y_pad):
        py = sy(tick)
        parts.append(
            f'<line x1="{margin_l}" y1="{py:.2f}" x2="{margin_l + plot_w}" '
            f'y2="{py:.2f}" stroke="#ddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{margin_l - 8}" y="{py + 4:.2f}" font-size="12" '
            f'text-anchor="end" fill="#222">{_tick_label(tick)}</text>'
        )
    for idx, (label, x, y) in enumerate(cleaned):
        color = _PALETTE[idx % len(_PALETTE)]
        keep = np.isfinite(x) & np.isfinite(y)
        # Split into contiguous finite runs so NaN gaps break the polyline.
        boundaries = np.flatnonzero(np.diff(keep.astype(int)) != 0) + 1
        for chunk_idx in np.split(np.arange(x.size), boundaries):
            if chunk_idx.size == 0 or not keep[chunk_idx[0]]:
                continue
            pts = " ".join(
                f"{sx(float(xv)):.2f},{sy(float(yv)):.2f}"
                for xv, yv in zip(x[chunk_idx], y[chunk_idx])
            )
            if chunk_idx.size == 1 or markers:
                for xv, yv in zip(x[chunk_idx], y[chunk_idx]):
                    parts.append(
                        f'<circle cx="{sx(float(xv)):.2f}" cy="{sy(float(yv)):.2f}" '
                        f'r="2.2" fill="{color}"/>'
                    )
            if chunk_idx.size > 1:
                parts.append(
                    f'<polyline points="{pts}" fill="none" stroke="{color}" '
                    'stroke-width="1.6"/>'
                )
    legend_y = margin_t + 16
    for idx, (label, _, _) in enumerate(cleaned):
        if not label:
            continue
        color = _PALETTE[idx % len(_PALETTE)]
        parts.append(
            f'<line x1="{margin_l + plot_w - 150}" y1="{legend_y - 4}" '
            f'x2="{margin_l + plot_w - 126}" y2="{legend_y - 4}" '
            f'stroke="{color}" stroke-width="2.4"/>'
        )
        parts.append(
            f'<text x="{margin_l + plot_w - 120}" y="{legend_y}" font-size="12" '
            f'fill="#222">{escape(label)}</text>'
        )
        legend_y += 18
    if title:
        parts.append(
            f'<text x="{width / 2:.0f}" y="24" font-size="15" text-anchor="middle" '
            f'fill="#000">{escape(title)}</text>'
        )
    if x_label:
        parts.append(
            f'<text x="{margin_l + plot_w / 2:.0f}" y="{height - 16}" font-size="13" '
            f'text-anchor="middle" fill="#000">{escape(x_label)}</text>'
        )
    if y_label:
        parts.append(
            f'<text x="20" y="{margin_t + plot_h / 2:.0f}" font-size="13" '
            f'text-anchor="middle" fill="#000" '
            f'transform="rotate(-90 20 {margin_t + plot_h / 2:.0f})">{escape(y_label)}</text>'
        )
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")
