"""Software sweep oscilloscope drawing into a gray pixel buffer.

The time axis wraps: once t passes the window width the sweep starts over at
the left edge, clearing one column ahead of the head so the previous sweep
stays visible behind it.
"""

from __future__ import annotations

import math

import numpy as np

from .transform import AxisLayout, pixel_from_data

BACKGROUND = 0
TRACE_GRAY = 255
CONNECT_GRAY = 128


class Scope:
    def __init__(self, width: int, height: int,
                 t_range: tuple[float, float], v_range: tuple[float, float]):
        self.buffer = np.zeros((height, width), dtype=np.uint8)
        self.axis = AxisLayout((0, 0, width - 1, height - 1),
                               (float(t_range[0]), float(t_range[1])),
                               (float(v_range[0]), float(v_range[1])))
        self.last_column = -1

    @property
    def width(self) -> int:
        return self.buffer.shape[1]

    @property
    def height(self) -> int:
        return self.buffer.shape[0]

    def clear(self) -> None:
        self.buffer[:] = BACKGROUND
        self.last_column = -1

    def set_data(self, t: float, v: float, v_old: float | None = None,
                 gray: int = TRACE_GRAY) -> None:
        """Draw a vertical segment from v_old's row to v's row at the column
        for (wrapped) time t, clearing the column ahead of the sweep head.
        Non-finite values are skipped."""
        if not math.isfinite(v) or not math.isfinite(t):
            return
        if v_old is None or not math.isfinite(v_old):
            v_old = v
        t0, t1 = self.axis.x_range
        span = t1 - t0
        tw = t0 + (t - t0) % span
        px, _ = pixel_from_data(tw, 0.0, self.axis)
        col = min(max(math.floor(px + 0.5), 0), self.width - 1)
        self.buffer[:, (col + 1) % self.width] = BACKGROUND
        r0 = self._row(v_old)
        r1 = self._row(v)
        lo, hi = (r0, r1) if r0 <= r1 else (r1, r0)
        self.buffer[lo:hi + 1, col] = gray
        self.last_column = col

    def _row(self, v: float) -> int:
        _, py = pixel_from_data(0.0, v, self.axis)
        return min(max(math.floor(py + 0.5), 0), self.height - 1)
