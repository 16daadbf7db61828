"""Binary netpbm codecs: P6 pixmaps for images, P5 graymaps for diff maps.

Only ``maxval`` 255 is supported. Comments in headers are accepted on read
and never written.
"""

from __future__ import annotations

import os

import numpy as np

from .cipher import RgbImage

WHITESPACE = b" \t\n\r\v\f"


class PixmapError(ValueError):
    pass


class BadMagicError(PixmapError):
    pass


class UnsupportedMaxvalError(PixmapError):
    pass


class TruncatedPayloadError(PixmapError):
    pass


def _parse_header(data: bytes, magic: bytes) -> tuple[int, int, int]:
    """Return ``(width, height, payload_offset)``."""
    if data[:2] != magic:
        raise BadMagicError(f"expected magic {magic.decode()}, found {data[:2]!r}")
    pos = 2
    fields = []
    while len(fields) < 3:
        if pos >= len(data):
            raise TruncatedPayloadError("header ends before width, height and maxval")
        c = data[pos:pos + 1]
        if c in WHITESPACE and c:
            pos += 1
        elif c == b"#":
            end = data.find(b"\n", pos)
            pos = len(data) if end < 0 else end + 1
        else:
            start = pos
            while pos < len(data) and data[pos:pos + 1] not in WHITESPACE and data[pos:pos + 1] != b"#":
                pos += 1
            token = data[start:pos]
            if not token.isdigit():
                raise PixmapError(f"bad header field {token!r}")
            fields.append(int(token))
    width, height, maxval = fields
    if maxval != 255:
        raise UnsupportedMaxvalError(f"maxval must be 255, got {maxval}")
    if width < 1 or height < 1:
        raise PixmapError(f"image size must be positive, got {width}x{height}")
    if pos >= len(data) or data[pos:pos + 1] not in WHITESPACE:
        raise TruncatedPayloadError("missing whitespace after maxval")
    return width, height, pos + 1


def _read_raster(path, magic: bytes, channels: int) -> np.ndarray:
    with open(path, "rb") as fh:
        data = fh.read()
    width, height, offset = _parse_header(data, magic)
    size = width * height * channels
    payload = data[offset:offset + size]
    if len(payload) < size:
        raise TruncatedPayloadError(f"expected {size} payload bytes, found {len(payload)}")
    arr = np.frombuffer(payload, dtype=np.uint8)
    return arr.reshape((height, width, channels) if channels > 1 else (height, width))


def _write_raster(path, magic: bytes, arr: np.ndarray) -> None:
    height, width = arr.shape[:2]
    header = b"%s\n%d %d\n255\n" % (magic, width, height)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.ascontiguousarray(arr, dtype=np.uint8).tobytes())


def read_ppm(path: str | os.PathLike) -> RgbImage:
    return RgbImage(_read_raster(path, b"P6", 3))


def write_ppm(img: RgbImage, path: str | os.PathLike) -> None:
    _write_raster(path, b"P6", img.pixels)


def read_pgm(path: str | os.PathLike) -> np.ndarray:
    return _read_raster(path, b"P5", 1).copy()


def write_pgm(plane: np.ndarray, path: str | os.PathLike) -> None:
    """Write a 2-D plane; boolean planes are written as 0 / 255."""
    plane = np.asarray(plane)
    if plane.ndim != 2:
        raise ValueError(f"graymap must be 2-D, got shape {plane.shape}")
    if plane.dtype == bool:
        plane = plane.astype(np.uint8) * 255
    _write_raster(path, b"P5", plane)
