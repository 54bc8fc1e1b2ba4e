"""Binary image-frame wire format.

Little-endian 16-byte header followed by row-major 8-bit samples::

    magic "IVIM" (4) | version u8 (=1) | widget_id u32 | width u16 |
    height u16 | channels u8 | reserved u16 (=0) | payload

Text messages on the websocket are JSON objects with a "type" field; only
image frames travel as binary.
"""

from __future__ import annotations

import struct

import numpy as np

MAGIC = b"IVIM"
VERSION = 1
HEADER = struct.Struct("<4sBIHHBH")
MAX_SIDE = 0xFFFF


class FrameTooLarge(ValueError):
    pass


class BadFrame(ValueError):
    pass


def encode_image_frame(widget_id: int, buf) -> bytes:
    """Serialize an 8-bit gray (HxW) or RGB (HxWx3) buffer, bit-exact."""
    arr = np.ascontiguousarray(buf)
    if arr.dtype != np.uint8:
        raise BadFrame(f"buffer must be uint8, got {arr.dtype}")
    if arr.ndim == 3 and arr.shape[2] == 1:
        arr = arr[:, :, 0]
    if arr.ndim == 2:
        channels = 1
    elif arr.ndim == 3 and arr.shape[2] == 3:
        channels = 3
    else:
        raise BadFrame(f"buffer must have 1 or 3 channels, got shape {arr.shape}")
    height, width = arr.shape[:2]
    if width > MAX_SIDE or height > MAX_SIDE:
        raise FrameTooLarge(f"frame too large: {width}x{height}")
    header = HEADER.pack(MAGIC, VERSION, int(widget_id), width, height, channels, 0)
    return header + arr.tobytes()


def decode_image_frame(data: bytes) -> tuple[int, np.ndarray]:
    """Exact inverse of :func:`encode_image_frame`."""
    if len(data) < HEADER.size:
        raise BadFrame("truncated header")
    magic, version, widget_id, width, height, channels, _ = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise BadFrame(f"bad magic {magic!r}")
    if version != VERSION:
        raise BadFrame(f"unsupported version {version}")
    if channels not in (1, 3):
        raise BadFrame(f"bad channel count {channels}")
    expected = width * height * channels
    payload = data[HEADER.size:]
    if len(payload) != expected:
        raise BadFrame(f"payload size {len(payload)} != {expected}")
    arr = np.frombuffer(payload, dtype=np.uint8)
    shape = (height, width) if channels == 1 else (height, width, 3)
    return widget_id, arr.reshape(shape).copy()
