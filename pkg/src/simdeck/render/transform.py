"""Exact pixel <-> data coordinate transforms for plot areas.

The plot rectangle maps inclusively: the left pixel column is x_min, the
right pixel column is x_max; the vertical axis is inverted (bottom row is
y_min).  Out-of-rect inputs extrapolate linearly.
"""

from __future__ import annotations

from dataclasses import dataclass


class BadAxisError(ValueError):
    pass


@dataclass(frozen=True)
class AxisLayout:
    plot_rect: tuple[int, int, int, int]  # left, top, right, bottom (pixels)
    x_range: tuple[float, float]
    y_range: tuple[float, float]

    def __post_init__(self):
        left, top, right, bottom = self.plot_rect
        if right <= left or bottom <= top:
            raise BadAxisError(f"bad axis: degenerate plot rect {self.plot_rect}")
        if self.x_range[1] <= self.x_range[0] or self.y_range[1] <= self.y_range[0]:
            raise BadAxisError(f"bad axis: degenerate ranges {self.x_range} {self.y_range}")


def data_from_pixel(px: float, py: float, axis: AxisLayout) -> tuple[float, float]:
    left, top, right, bottom = axis.plot_rect
    x0, x1 = axis.x_range
    y0, y1 = axis.y_range
    x = x0 + (px - left) / (right - left) * (x1 - x0)
    y = y0 + (bottom - py) / (bottom - top) * (y1 - y0)
    return x, y


def pixel_from_data(x: float, y: float, axis: AxisLayout) -> tuple[float, float]:
    left, top, right, bottom = axis.plot_rect
    x0, x1 = axis.x_range
    y0, y1 = axis.y_range
    px = left + (x - x0) / (x1 - x0) * (right - left)
    py = bottom - (y - y0) / (y1 - y0) * (bottom - top)
    return px, py
