from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from PIL import Image, ImageDraw

from metrodg.curve import MINUTES_PER_DAY, LoadCurve, format_clock

DEMAND_COLOR = "#d62728"
GRID_COLOR = "#1f77b4"
DG_FILL = "#2ca02c"
AXIS_COLOR = "#000000"
GRID_LINE_COLOR = "#d9d9d9"

_MARGIN_LEFT = 80
_MARGIN_RIGHT = 30
_MARGIN_TOP = 60
_MARGIN_BOTTOM = 70
_Y_TICKS = 5
_X_TICK_HOURS = 3


def _escape(text: str) -> str:
    return (
        text.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


@dataclass(frozen=True)
class _Frame:
    width: int
    height: int
    y_max: float

    @property
    def left(self) -> int:
        return _MARGIN_LEFT

    @property
    def right(self) -> int:
        return self.width - _MARGIN_RIGHT

    @property
    def top(self) -> int:
        return _MARGIN_TOP

    @property
    def bottom(self) -> int:
        return self.height - _MARGIN_BOTTOM

    def x(self, minute: float) -> float:
        return self.left + minute / MINUTES_PER_DAY * (self.right - self.left)

    def y(self, value: float) -> float:
        return self.bottom - value / self.y_max * (self.bottom - self.top)


def _frame(demand: LoadCurve, width: int, height: int) -> _Frame:
    top = float(demand.values.max())
    return _Frame(width, height, top * 1.1 if top > 0 else 1.0)


def _steps(curve: LoadCurve, frame: _Frame) -> list[tuple[float, float]]:
    """Corner points of the step function, left to right."""
    step = curve.grid.step_minutes
    points = []
    for idx, value in enumerate(curve.values):
        y = frame.y(float(value))
        points.append((frame.x(idx * step), y))
        points.append((frame.x((idx + 1) * step), y))
    return points


def _dg_region(
    demand: LoadCurve, grid_after: LoadCurve, frame: _Frame
) -> list[tuple[float, float]]:
    return _steps(demand, frame) + list(reversed(_steps(grid_after, frame)))


def _points_attr(points: list[tuple[float, float]]) -> str:
    return " ".join(f"{x:.2f},{y:.2f}" for x, y in points)


def render_comparison_svg(
    demand: LoadCurve,
    grid_after: LoadCurve,
    width: int = 1024,
    height: int = 560,
    title: str = "Metro load curve before vs. after DG",
) -> str:
    frame = _frame(demand, width, height)
    unit = demand.unit.value
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        '<rect x="0" y="0" width="100%" height="100%" fill="#ffffff"/>',
        f'<text x="{width / 2:.1f}" y="32" text-anchor="middle" font-size="20" '
        f'font-family="Arial">{_escape(title)}</text>',
    ]

    for i in range(_Y_TICKS + 1):
        value = frame.y_max * i / _Y_TICKS
        y = frame.y(value)
        lines.append(
            f'<line x1="{frame.left}" y1="{y:.2f}" x2="{frame.right}" y2="{y:.2f}" '
            f'stroke="{GRID_LINE_COLOR}" stroke-width="1"/>'
        )
        lines.append(
            f'<text x="{frame.left - 8}" y="{y + 4:.2f}" text-anchor="end" '
            f'font-size="12" font-family="Arial">{value:.2f}</text>'
        )
    for hour in range(0, 25, _X_TICK_HOURS):
        x = frame.x(hour * 60)
        lines.append(
            f'<line x1="{x:.2f}" y1="{frame.bottom}" x2="{x:.2f}" '
            f'y2="{frame.bottom + 6}" stroke="{AXIS_COLOR}" stroke-width="1"/>'
        )
        lines.append(
            f'<text x="{x:.2f}" y="{frame.bottom + 22}" text-anchor="middle" '
            f'font-size="12" font-family="Arial">{format_clock(hour * 60)}</text>'
        )

    region = _points_attr(_dg_region(demand, grid_after, frame))
    lines.append(
        f'<polygon class="dg-region" fill="{DG_FILL}" fill-opacity="0.35" '
        f'stroke="none" points="{region}"/>'
    )
    lines.append(
        f'<polyline class="series demand" fill="none" stroke="{DEMAND_COLOR}" '
        f'stroke-width="2" points="{_points_attr(_steps(demand, frame))}"/>'
    )
    lines.append(
        f'<polyline class="series grid-after" fill="none" stroke="{GRID_COLOR}" '
        f'stroke-width="2" points="{_points_attr(_steps(grid_after, frame))}"/>'
    )

    lines.append(
        f'<line x1="{frame.left}" y1="{frame.bottom}" x2="{frame.right}" '
        f'y2="{frame.bottom}" stroke="{AXIS_COLOR}" stroke-width="2"/>'
    )
    lines.append(
        f'<line x1="{frame.left}" y1="{frame.top}" x2="{frame.left}" '
        f'y2="{frame.bottom}" stroke="{AXIS_COLOR}" stroke-width="2"/>'
    )
    lines.append(
        f'<text x="{(frame.left + frame.right) / 2:.1f}" y="{height - 20}" '
        'text-anchor="middle" font-size="14" font-family="Arial">Time of day</text>'
    )
    lines.append(
        f'<text x="20" y="{(frame.top + frame.bottom) / 2:.1f}" '
        'text-anchor="middle" font-size="14" font-family="Arial" '
        f'transform="rotate(-90 20 {(frame.top + frame.bottom) / 2:.1f})">'
        f"Power ({_escape(unit)})</text>"
    )

    legend = [
        (DEMAND_COLOR, "Demand before DG"),
        (GRID_COLOR, "Grid draw after DG"),
        (DG_FILL, "DG output"),
    ]
    for idx, (color, label) in enumerate(legend):
        lx = frame.right - 190
        ly = frame.top + 8 + idx * 20
        lines.append(
            f'<rect x="{lx}" y="{ly - 6}" width="18" height="10" fill="{color}"/>'
        )
        lines.append(
            f'<text x="{lx + 26}" y="{ly + 3}" font-size="12" '
            f'font-family="Arial">{_escape(label)}</text>'
        )

    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_comparison_png(
    demand: LoadCurve,
    grid_after: LoadCurve,
    path: Path,
    width: int = 1024,
    height: int = 560,
) -> Path:
    """Raster preview of the same overlay as the SVG chart."""
    frame = _frame(demand, width, height)
    image = Image.new("RGB", (width, height), "#ffffff")
    draw = ImageDraw.Draw(image, "RGBA")

    for i in range(_Y_TICKS + 1):
        value = frame.y_max * i / _Y_TICKS
        y = frame.y(value)
        draw.line([(frame.left, y), (frame.right, y)], fill=GRID_LINE_COLOR)
        draw.text((8, y - 6), f"{value:.2f}", fill=AXIS_COLOR)
    for hour in range(0, 25, _X_TICK_HOURS):
        x = frame.x(hour * 60)
        draw.line([(x, frame.bottom), (x, frame.bottom + 6)], fill=AXIS_COLOR)
        label = format_clock(hour * 60)
        draw.text((x - 14, frame.bottom + 10), label, fill=AXIS_COLOR)

    draw.polygon(_dg_region(demand, grid_after, frame), fill=(44, 160, 44, 90))
    draw.line(_steps(demand, frame), fill=DEMAND_COLOR, width=2)
    draw.line(_steps(grid_after, frame), fill=GRID_COLOR, width=2)
    axes = [
        (frame.left, frame.top),
        (frame.left, frame.bottom),
        (frame.right, frame.bottom),
    ]
    draw.line(axes, fill=AXIS_COLOR, width=2)
    middle = (frame.left + frame.right) / 2
    draw.text((middle - 30, height - 30), "Time of day", fill=AXIS_COLOR)
    draw.text((8, frame.top - 24), f"Power ({demand.unit.value})", fill=AXIS_COLOR)

    path.parent.mkdir(parents=True, exist_ok=True)
    image.save(path, format="PNG")
    return path
