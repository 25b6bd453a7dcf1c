"""
shared/harness/svg_writer.py

Standalone SVG 1.1 heatmap of one column of a 2-axis ResultTable: one
rect per grid point, linear color scale, axis labels taken from the
parameter names and a color bar annotated with the min/max values.

The first axis runs left to right, the second bottom to top.

Usage:
    emit_svg_heatmap(table, "concurrence", Path("results/fig4a.svg"))
"""
import logging
from pathlib import Path

import numpy as np
from jinja2 import Template

from shared.harness.table import ResultTable

logger = logging.getLogger(__name__)

WIDTH, HEIGHT = 640, 480
MARGINS = (40, 110, 60, 70)   # top, right, bottom, left
BAR_WIDTH = 18

# low -> mid -> high
COLOR_STOPS = ((68, 1, 84), (33, 145, 140), (253, 231, 37))


def color_at(t: float) -> str:
    """Hex color for t in [0, 1] on the three-stop scale."""
    t = min(max(float(t), 0.0), 1.0)
    if t <= 0.5:
        lo, hi, u = COLOR_STOPS[0], COLOR_STOPS[1], t / 0.5
    else:
        lo, hi, u = COLOR_STOPS[1], COLOR_STOPS[2], (t - 0.5) / 0.5
    r, g, b = (round(a + (z - a) * u) for a, z in zip(lo, hi))
    return f"#{r:02x}{g:02x}{b:02x}"


SVG_TEMPLATE = Template(r"""<?xml version="1.0" encoding="UTF-8" standalone="no"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{{ width }}" height="{{ height }}" viewBox="0 0 {{ width }} {{ height }}">
  <defs>
    <linearGradient id="colorbar" x1="0" y1="1" x2="0" y2="0">
      <stop offset="0" stop-color="{{ low_color }}"/>
      <stop offset="0.5" stop-color="{{ mid_color }}"/>
      <stop offset="1" stop-color="{{ high_color }}"/>
    </linearGradient>
  </defs>
  <rect x="0" y="0" width="{{ width }}" height="{{ height }}" fill="#ffffff"/>
  <text x="{{ margin_left }}" y="24" font-family="Helvetica, Arial, sans-serif" font-size="14" fill="#333333">{{ title }}</text>
  <g transform="translate({{ margin_left }},{{ margin_top }})">
{% for c in cells %}    <rect class="cell" x="{{ c.x }}" y="{{ c.y }}" width="{{ cell_w }}" height="{{ cell_h }}" fill="{{ c.fill }}"><title>{{ x_name }}={{ c.xv }}, {{ y_name }}={{ c.yv }}: {{ c.value }}</title></rect>
{% endfor %}    <rect x="0" y="0" width="{{ plot_w }}" height="{{ plot_h }}" fill="none" stroke="#888888" stroke-width="1"/>
    <text x="0" y="{{ plot_h + 16 }}" font-family="Helvetica, Arial, sans-serif" font-size="10" text-anchor="start" fill="#444444">{{ x_min }}</text>
    <text x="{{ plot_w }}" y="{{ plot_h + 16 }}" font-family="Helvetica, Arial, sans-serif" font-size="10" text-anchor="end" fill="#444444">{{ x_max }}</text>
    <text x="{{ plot_w / 2 }}" y="{{ plot_h + 40 }}" font-family="Helvetica, Arial, sans-serif" font-size="12" text-anchor="middle" fill="#333333">{{ x_name }}</text>
    <text x="-6" y="{{ plot_h }}" font-family="Helvetica, Arial, sans-serif" font-size="10" text-anchor="end" fill="#444444">{{ y_min }}</text>
    <text x="-6" y="10" font-family="Helvetica, Arial, sans-serif" font-size="10" text-anchor="end" fill="#444444">{{ y_max }}</text>
    <text x="-48" y="{{ plot_h / 2 }}" font-family="Helvetica, Arial, sans-serif" font-size="12" text-anchor="middle" fill="#333333" transform="rotate(-90 -48 {{ plot_h / 2 }})">{{ y_name }}</text>
  </g>
  <g transform="translate({{ bar_x }},{{ margin_top }})">
    <rect x="0" y="0" width="{{ bar_w }}" height="{{ plot_h }}" fill="url(#colorbar)" stroke="#888888" stroke-width="1"/>
    <text x="{{ bar_w + 6 }}" y="10" font-family="Helvetica, Arial, sans-serif" font-size="10" fill="#444444">max {{ v_max }}</text>
    <text x="{{ bar_w + 6 }}" y="{{ plot_h }}" font-family="Helvetica, Arial, sans-serif" font-size="10" fill="#444444">min {{ v_min }}</text>
    <text x="{{ bar_w / 2 }}" y="{{ plot_h + 16 }}" font-family="Helvetica, Arial, sans-serif" font-size="10" text-anchor="middle" fill="#444444">{{ value_name }}</text>
  </g>
</svg>
""", autoescape=True)


def _fmt(value: float) -> str:
    return format(float(value), ".4g")


def render_svg_heatmap(table: ResultTable, value_column: str) -> str:
    if len(table.axes) != 2:
        raise ValueError(f"Heatmap needs a 2-axis table, {table.name} has {len(table.axes)}")
    xs, ys, values = table.grid(value_column)

    top, right, bottom, left = MARGINS
    plot_w, plot_h = WIDTH - left - right, HEIGHT - top - bottom
    cell_w, cell_h = plot_w / len(xs), plot_h / len(ys)

    v_min, v_max = float(np.min(values)), float(np.max(values))
    span = v_max - v_min

    cells = []
    for i, xv in enumerate(xs):
        for j, yv in enumerate(ys):
            v = float(values[i, j])
            t = 0.5 if span == 0 else (v - v_min) / span
            cells.append({
                "x": round(i * cell_w, 3),
                "y": round(plot_h - (j + 1) * cell_h, 3),
                "fill": color_at(t),
                "xv": _fmt(xv),
                "yv": _fmt(yv),
                "value": _fmt(v),
            })

    return SVG_TEMPLATE.render(
        width=WIDTH,
        height=HEIGHT,
        margin_top=top,
        margin_left=left,
        plot_w=plot_w,
        plot_h=plot_h,
        cell_w=round(cell_w, 3),
        cell_h=round(cell_h, 3),
        cells=cells,
        title=f"{table.name}: {value_column}",
        x_name=table.axes[0],
        y_name=table.axes[1],
        x_min=_fmt(xs[0]),
        x_max=_fmt(xs[-1]),
        y_min=_fmt(ys[0]),
        y_max=_fmt(ys[-1]),
        bar_x=left + plot_w + 20,
        bar_w=BAR_WIDTH,
        value_name=value_column,
        v_min=_fmt(v_min),
        v_max=_fmt(v_max),
        low_color=color_at(0.0),
        mid_color=color_at(0.5),
        high_color=color_at(1.0),
    )


def emit_svg_heatmap(table: ResultTable, value_column: str, path: Path) -> Path:
    svg = render_svg_heatmap(table, value_column)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(svg)
    logger.info(f"SVG heatmap written: {path} [{table.name}.{value_column}]")
    return path
