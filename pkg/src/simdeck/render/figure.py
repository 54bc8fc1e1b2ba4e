"""Minimal plot renderer: axis box, ticks, polylines, scatter markers and
text, rasterized into an RGB buffer with integer line drawing.  No external
plotting library; the figure's AxisLayout is exposed for event binding."""

from __future__ import annotations

import math

import numpy as np

from .font import GLYPH_H, draw_text, text_width
from .transform import AxisLayout, pixel_from_data

COLORS = {
    "black": (0, 0, 0),
    "white": (255, 255, 255),
    "gray": (128, 128, 128),
    "red": (220, 40, 40),
    "green": (40, 160, 40),
    "blue": (50, 80, 220),
    "cyan": (0, 180, 180),
    "magenta": (200, 0, 200),
    "yellow": (200, 180, 0),
    "violet": (140, 60, 200),
    "orange": (230, 140, 0),
}


def _rgb(color) -> tuple[int, int, int]:
    if isinstance(color, str):
        try:
            return COLORS[color]
        except KeyError:
            raise ValueError(f"unknown color '{color}'") from None
    r, g, b = color
    return int(r), int(g), int(b)


def _round(v: float) -> int:
    return math.floor(v + 0.5)


def _clip_segment(x0, y0, x1, y1, left, top, right, bottom):
    """Liang-Barsky clip; returns clipped float endpoints or None."""
    dx, dy = x1 - x0, y1 - y0
    t0, t1 = 0.0, 1.0
    for p, q in ((-dx, x0 - left), (dx, right - x0), (-dy, y0 - top), (dy, bottom - y0)):
        if p == 0:
            if q < 0:
                return None
            continue
        r = q / p
        if p < 0:
            if r > t1:
                return None
            t0 = max(t0, r)
        else:
            if r < t0:
                return None
            t1 = min(t1, r)
    return x0 + t0 * dx, y0 + t0 * dy, x0 + t1 * dx, y0 + t1 * dy


def draw_line_px(buf: np.ndarray, x0: int, y0: int, x1: int, y1: int, color) -> None:
    """Bresenham line; pixels outside the buffer are dropped."""
    h, w = buf.shape[:2]
    dx = abs(x1 - x0)
    dy = -abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx + dy
    x, y = x0, y0
    while True:
        if 0 <= x < w and 0 <= y < h:
            buf[y, x] = color
        if x == x1 and y == y1:
            break
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x += sx
        if e2 <= dx:
            err += dx
            y += sy


_MARKERS = {
    "o": [(dx, dy) for dx in range(-3, 4) for dy in range(-3, 4)
          if 6 <= dx * dx + dy * dy <= 11],
    "x": [(d, d) for d in range(-3, 4)] + [(d, -d) for d in range(-3, 4)],
    "+": [(d, 0) for d in range(-3, 4)] + [(0, d) for d in range(-3, 4)],
    ".": [(0, 0), (1, 0), (0, 1), (1, 1)],
    "s": [(dx, dy) for dx in range(-3, 4) for dy in range(-3, 4)
          if max(abs(dx), abs(dy)) == 3],
}


def draw_marker_px(buf: np.ndarray, x: int, y: int, marker: str, color) -> None:
    h, w = buf.shape[:2]
    for dx, dy in _MARKERS.get(marker, _MARKERS["."]):
        px, py = x + dx, y + dy
        if 0 <= px < w and 0 <= py < h:
            buf[py, px] = color


def _fmt_tick(v: float) -> str:
    s = format(v, "g")
    return s if len(s) <= 7 else format(v, ".2g")


class Figure:
    """A drawable plot.  Draw calls are recorded; :meth:`render` rasterizes
    axes, ticks and the recorded series into a fresh RGB buffer."""

    def __init__(self, width: int = 400, height: int = 300,
                 x_range: tuple[float, float] = (0.0, 1.0),
                 y_range: tuple[float, float] = (0.0, 1.0),
                 margins: tuple[int, int, int, int] = (52, 14, 14, 32),
                 nticks: int = 5):
        left, top, right_m, bottom_m = margins
        self.width = width
        self.height = height
        self.nticks = nticks
        self.axis = AxisLayout((left, top, width - 1 - right_m, height - 1 - bottom_m),
                               (float(x_range[0]), float(x_range[1])),
                               (float(y_range[0]), float(y_range[1])))
        self.xlabel = ""
        self.ylabel = ""
        self.title = ""
        self._ops: list[tuple] = []

    def plot_line(self, xs, ys, color="black") -> None:
        xs, ys = list(xs), list(ys)
        if len(xs) != len(ys):
            raise ValueError("xs and ys must have equal length")
        if not xs:
            return
        self._ops.append(("line", xs, ys, _rgb(color)))

    def plot_scatter(self, xs, ys, marker="o", color="black") -> None:
        xs, ys = list(xs), list(ys)
        if len(xs) != len(ys):
            raise ValueError("xs and ys must have equal length")
        if not xs:
            return
        self._ops.append(("scatter", xs, ys, marker, _rgb(color)))

    def text(self, x: float, y: float, s: str, color="black") -> None:
        self._ops.append(("text", x, y, s, _rgb(color)))

    def render(self) -> np.ndarray:
        buf = np.full((self.height, self.width, 3), 255, dtype=np.uint8)
        self._draw_axes(buf)
        left, top, right, bottom = self.axis.plot_rect
        for op in self._ops:
            if op[0] == "line":
                _, xs, ys, color = op
                pts = [pixel_from_data(x, y, self.axis) for x, y in zip(xs, ys)]
                for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
                    seg = _clip_segment(x0, y0, x1, y1, left, top, right, bottom)
                    if seg is not None:
                        draw_line_px(buf, _round(seg[0]), _round(seg[1]),
                                     _round(seg[2]), _round(seg[3]), color)
                if len(pts) == 1:
                    px, py = _round(pts[0][0]), _round(pts[0][1])
                    if left <= px <= right and top <= py <= bottom:
                        buf[py, px] = color
            elif op[0] == "scatter":
                _, xs, ys, marker, color = op
                for x, y in zip(xs, ys):
                    px, py = pixel_from_data(x, y, self.axis)
                    px, py = _round(px), _round(py)
                    if left - 3 <= px <= right + 3 and top - 3 <= py <= bottom + 3:
                        draw_marker_px(buf, px, py, marker, color)
            else:
                _, x, y, s, color = op
                px, py = pixel_from_data(x, y, self.axis)
                draw_text(buf, _round(px), _round(py), s, color)
        return buf

    def _draw_axes(self, buf: np.ndarray) -> None:
        left, top, right, bottom = self.axis.plot_rect
        black = COLORS["black"]
        draw_line_px(buf, left, top, right, top, black)
        draw_line_px(buf, left, bottom, right, bottom, black)
        draw_line_px(buf, left, top, left, bottom, black)
        draw_line_px(buf, right, top, right, bottom, black)
        x0, x1 = self.axis.x_range
        y0, y1 = self.axis.y_range
        for i in range(self.nticks):
            f = i / (self.nticks - 1)
            xv = x0 + f * (x1 - x0)
            px = _round(left + f * (right - left))
            draw_line_px(buf, px, bottom + 1, px, bottom + 4, black)
            label = _fmt_tick(xv)
            draw_text(buf, px - text_width(label) // 2, bottom + 6, label, black)
            yv = y0 + f * (y1 - y0)
            py = _round(bottom - f * (bottom - top))
            draw_line_px(buf, left - 4, py, left - 1, py, black)
            label = _fmt_tick(yv)
            draw_text(buf, left - 6 - text_width(label), py - GLYPH_H // 2, label, black)
        if self.xlabel:
            draw_text(buf, (left + right) // 2 - text_width(self.xlabel) // 2,
                      bottom + 8 + GLYPH_H, self.xlabel, black)
        if self.ylabel:
            draw_text(buf, 2, top - GLYPH_H - 2 if top >= GLYPH_H + 3 else 2,
                      self.ylabel, black)
        if self.title:
            draw_text(buf, (left + right) // 2 - text_width(self.title) // 2,
                      max(0, top - GLYPH_H - 4), self.title, black)
