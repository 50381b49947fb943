"""Deterministic SVG roofline plots and comparison-table text output.

The plot is a minimal SVG 1.1 document (rect, line, polyline, circle,
text, g only; no scripts, no external references, generic font family).
Identical inputs produce byte-identical output, so plots can be golden-
file tested.

Pixel mapping
-------------
Both axes are base-10 logarithmic.  With a plot area spanning
``MARGIN_LEFT .. width_px - MARGIN_RIGHT`` horizontally and
``MARGIN_TOP .. height_px - MARGIN_BOTTOM`` vertically, a data value
``v`` maps to::

    x_px = MARGIN_LEFT + (log10(v) - log10(x_min)) / (log10(x_max) - log10(x_min))
           * (width_px - MARGIN_LEFT - MARGIN_RIGHT)
    y_px = height_px - MARGIN_BOTTOM - (log10(v) - log10(y_min)) / (log10(y_max) - log10(y_min))
           * (height_px - MARGIN_TOP - MARGIN_BOTTOM)

and coordinates are written with two decimal places.  When no explicit
range is given, axes auto-fit the data (achieved points plus the ridge
and peak) padded by half a decade on each side.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable
from xml.sax.saxutils import escape

from .errors import NonPositiveValue
from .metrics import IntensityMode
from .model import Cell, ComparisonTable, RooflineModel, roof_bandwidth

MARGIN_LEFT = 70
MARGIN_RIGHT = 20
MARGIN_TOP = 40
MARGIN_BOTTOM = 50

# Half a decade of padding on each side when auto-fitting axis ranges.
AUTO_PAD_DECADES = 0.5

_POINT_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                 "#ff7f0e", "#8c564b", "#e377c2", "#17becf")

_X_LABELS = {
    IntensityMode.INTENSITY_PERFORMANCE: "Instructions per Byte",
    IntensityMode.PER_BYTE: "Instructions per Byte",
    IntensityMode.PER_TRANSACTION: "Instructions per Transaction",
}


@dataclass(frozen=True)
class PlotOptions:
    """Size, ranges, and labels for a roofline plot."""

    width_px: int = 800
    height_px: int = 560
    x_range: tuple[float, float] | None = None
    y_range: tuple[float, float] | None = None
    x_label: str | None = None
    y_label: str | None = None
    title: str = ""

    def __post_init__(self):
        if self.width_px <= 0 or self.height_px <= 0:
            raise ValueError("plot dimensions must be positive")
        for rng in (self.x_range, self.y_range):
            if rng is not None:
                lo, hi = rng
                if not (lo > 0 and lo < hi):
                    raise ValueError(
                        "axis ranges need 0 < min < max (log axes)")


@dataclass(frozen=True)
class LogAxis:
    """Log10 data-to-pixel mapping along one axis."""

    lo: float
    hi: float
    px_lo: float
    px_hi: float

    def to_px(self, value: float) -> float:
        if not value > 0:
            raise NonPositiveValue(
                f"cannot place {value} on a logarithmic axis")
        span = math.log10(self.hi) - math.log10(self.lo)
        frac = (math.log10(value) - math.log10(self.lo)) / span
        return self.px_lo + frac * (self.px_hi - self.px_lo)


def _auto_range(values: Iterable[float]) -> tuple[float, float]:
    vals = [v for v in values if v > 0]
    if not vals:
        raise NonPositiveValue("no positive values to fit an axis range to")
    return (10.0 ** (math.log10(min(vals)) - AUTO_PAD_DECADES),
            10.0 ** (math.log10(max(vals)) + AUTO_PAD_DECADES))


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _decade_label(k: int) -> str:
    return f"{10.0 ** k:g}"


def render_svg(model: RooflineModel, opts: PlotOptions = PlotOptions()) -> bytes:
    """Render a roofline model as a standalone SVG document.

    The roofline is one polyline: the memory slope joining the compute
    ceiling at (ridge intensity, peak GIPS).  Each achieved point gets a
    colored circle and a ``kernel@level`` legend entry.  Raises
    :class:`NonPositiveValue` if anything to plot is zero or negative.
    """
    peak = model.ceilings.peak_gips
    bandwidth = roof_bandwidth(model.ceilings, model.intensity_mode)
    ridge = model.ridge_intensity
    if not (peak > 0 and bandwidth > 0 and ridge > 0):
        raise NonPositiveValue("model ceilings must be positive")
    for pt in model.points:
        if not pt.intensity > 0:
            raise NonPositiveValue(
                f"point {pt.kernel_name!r} has non-positive intensity")
        if not pt.gips > 0:
            raise NonPositiveValue(
                f"point {pt.kernel_name!r} has non-positive GIPS")

    x_range = opts.x_range or _auto_range(
        [pt.intensity for pt in model.points] + [ridge])
    y_range = opts.y_range or _auto_range(
        [pt.gips for pt in model.points] + [peak])
    x_axis = LogAxis(x_range[0], x_range[1],
                     MARGIN_LEFT, opts.width_px - MARGIN_RIGHT)
    y_axis = LogAxis(y_range[0], y_range[1],
                     opts.height_px - MARGIN_BOTTOM, MARGIN_TOP)

    plot_left, plot_right = x_axis.px_lo, x_axis.px_hi
    plot_bottom, plot_top = y_axis.px_lo, y_axis.px_hi

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{opts.width_px}" height="{opts.height_px}" '
        f'viewBox="0 0 {opts.width_px} {opts.height_px}">',
        f'<rect x="0" y="0" width="{opts.width_px}" '
        f'height="{opts.height_px}" fill="#ffffff"/>',
    ]

    # Decade gridlines with tick labels.
    out.append('<g stroke="#dddddd" stroke-width="1">')
    x_ticks = range(math.ceil(math.log10(x_range[0]) - 1e-9),
                    math.floor(math.log10(x_range[1]) + 1e-9) + 1)
    y_ticks = range(math.ceil(math.log10(y_range[0]) - 1e-9),
                    math.floor(math.log10(y_range[1]) + 1e-9) + 1)
    for k in x_ticks:
        px = x_axis.to_px(10.0 ** k)
        out.append(f'<line x1="{_fmt(px)}" y1="{_fmt(plot_top)}" '
                   f'x2="{_fmt(px)}" y2="{_fmt(plot_bottom)}"/>')
    for k in y_ticks:
        py = y_axis.to_px(10.0 ** k)
        out.append(f'<line x1="{_fmt(plot_left)}" y1="{_fmt(py)}" '
                   f'x2="{_fmt(plot_right)}" y2="{_fmt(py)}"/>')
    out.append('</g>')

    out.append('<g font-family="sans-serif" font-size="11" fill="#000000">')
    for k in x_ticks:
        px = x_axis.to_px(10.0 ** k)
        out.append(f'<text x="{_fmt(px)}" y="{_fmt(plot_bottom + 16)}" '
                   f'text-anchor="middle">{_decade_label(k)}</text>')
    for k in y_ticks:
        py = y_axis.to_px(10.0 ** k)
        out.append(f'<text x="{_fmt(plot_left - 6)}" y="{_fmt(py + 4)}" '
                   f'text-anchor="end">{_decade_label(k)}</text>')
    out.append('</g>')

    # Plot frame.
    out.append(
        f'<rect x="{_fmt(plot_left)}" y="{_fmt(plot_top)}" '
        f'width="{_fmt(plot_right - plot_left)}" '
        f'height="{_fmt(plot_bottom - plot_top)}" '
        f'fill="none" stroke="#000000" stroke-width="1"/>')

    # Roofline: memory slope up to the ridge, compute ceiling beyond it,
    # clipped to the x window (the slope additionally starts where it
    # enters the y window).
    slope_x0 = max(x_range[0], y_range[0] / bandwidth)
    if ridge <= x_range[0]:
        roof_pts = [(x_range[0], peak), (x_range[1], peak)]
    elif ridge >= x_range[1]:
        slope_x0 = min(slope_x0, x_range[1])
        roof_pts = [(slope_x0, bandwidth * slope_x0),
                    (x_range[1], bandwidth * x_range[1])]
    else:
        roof_pts = []
        if slope_x0 < ridge:
            roof_pts.append((slope_x0, bandwidth * slope_x0))
        roof_pts.append((ridge, peak))
        roof_pts.append((x_range[1], peak))
    coords = " ".join(
        f"{_fmt(x_axis.to_px(x))},{_fmt(y_axis.to_px(y))}"
        for x, y in roof_pts)
    out.append(f'<polyline points="{coords}" fill="none" '
               f'stroke="#000000" stroke-width="2"/>')

    # Achieved points and legend.
    legend_entries = []
    for i, pt in enumerate(model.points):
        color = _POINT_COLORS[i % len(_POINT_COLORS)]
        cx = x_axis.to_px(pt.intensity)
        cy = y_axis.to_px(pt.gips)
        out.append(f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="4" '
                   f'fill="{color}" stroke="#000000" stroke-width="0.5"/>')
        legend_entries.append(
            (color, f"{pt.kernel_name}@{pt.memory_level.value}"))
    if legend_entries:
        out.append('<g font-family="sans-serif" font-size="11">')
        lx = plot_left + 10
        for i, (color, label) in enumerate(legend_entries):
            ly = plot_top + 14 + i * 16
            out.append(f'<circle cx="{_fmt(lx)}" cy="{_fmt(ly - 4)}" r="4" '
                       f'fill="{color}"/>')
            out.append(f'<text x="{_fmt(lx + 8)}" y="{_fmt(ly)}">'
                       f'{escape(label)}</text>')
        out.append('</g>')

    # Title and axis labels.
    out.append('<g font-family="sans-serif" font-size="13" fill="#000000">')
    if opts.title:
        out.append(f'<text x="{_fmt(opts.width_px / 2)}" y="20" '
                   f'text-anchor="middle">{escape(opts.title)}</text>')
    x_label = opts.x_label or _X_LABELS[model.intensity_mode]
    y_label = opts.y_label or "GIPS"
    out.append(f'<text x="{_fmt((plot_left + plot_right) / 2)}" '
               f'y="{_fmt(opts.height_px - 12)}" text-anchor="middle">'
               f'{escape(x_label)}</text>')
    mid_y = (plot_top + plot_bottom) / 2
    out.append(f'<text x="16" y="{_fmt(mid_y)}" text-anchor="middle" '
               f'transform="rotate(-90 16 {_fmt(mid_y)})">'
               f'{escape(y_label)}</text>')
    out.append('</g>')

    out.append('</svg>')
    return ("\n".join(out) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# Tables

class TableFormat(Enum):
    MARKDOWN = "markdown"
    CSV = "csv"
    PLAIN = "plain"


def _format_cell(cell: Cell, fmt: TableFormat) -> str:
    if cell is None:
        return "n/a"
    if isinstance(cell, bool):
        return str(cell)
    if isinstance(cell, int):
        return str(cell) if fmt is TableFormat.CSV else f"{cell:,}"
    if isinstance(cell, float):
        return f"{cell:.3f}"
    return str(cell)


def render_table(table: ComparisonTable, fmt: TableFormat) -> str:
    """Render a comparison table as markdown, CSV, or plain text.

    Floats appear at three decimals in every format; integer counters get
    thousands separators in markdown/plain and stay raw digits in CSV.
    """
    if not table.columns:
        raise ValueError("table has no columns")
    header = ["Metric"] + list(table.columns)
    body = [[label] + [_format_cell(c, fmt) for c in cells]
            for label, cells in table.rows]

    if fmt is TableFormat.CSV:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(body)
        return out.getvalue()

    if fmt is TableFormat.MARKDOWN:
        lines = ["| " + " | ".join(header) + " |",
                 "| " + " | ".join("---" for _ in header) + " |"]
        lines += ["| " + " | ".join(row) + " |" for row in body]
        return "\n".join(lines) + "\n"

    widths = [max(len(row[i]) for row in [header] + body)
              for i in range(len(header))]
    lines = []
    for row in [header] + body:
        padded = [row[0].ljust(widths[0])]
        padded += [cell.rjust(widths[i + 1])
                   for i, cell in enumerate(row[1:])]
        lines.append("  ".join(padded).rstrip())
    return "\n".join(lines) + "\n"
