"""Render kit: pixel/data transforms, a sweep oscilloscope, a minimal plot
renderer and zero-contour extraction.  All outputs are plain numpy buffers."""

from __future__ import annotations

import numpy as np

from .contour import contour_zero
from .figure import COLORS, Figure, draw_line_px, draw_marker_px
from .font import draw_text, text_width
from .scope import BACKGROUND, CONNECT_GRAY, TRACE_GRAY, Scope
from .transform import AxisLayout, BadAxisError, data_from_pixel, pixel_from_data

__all__ = [
    "AxisLayout", "BadAxisError", "data_from_pixel", "pixel_from_data",
    "Figure", "COLORS", "draw_line_px", "draw_marker_px", "draw_text", "text_width",
    "Scope", "BACKGROUND", "CONNECT_GRAY", "TRACE_GRAY",
    "contour_zero", "save_png",
]


def save_png(buf, path: str) -> None:
    """Export an 8-bit gray or RGB buffer as a PNG file."""
    from PIL import Image

    arr = np.asarray(buf)
    if arr.dtype != np.uint8:
        raise ValueError("buffer must be 8-bit")
    if arr.ndim == 3 and arr.shape[2] == 1:
        arr = arr[:, :, 0]
    mode = "L" if arr.ndim == 2 else "RGB"
    Image.fromarray(arr, mode=mode).save(path, format="PNG")
