"""Grayscale image buffers and binary PGM (P5) serialization.

Images are 2-D numpy arrays, shape (height, width). On disk they are 8-bit;
in memory they may be float64 while a restoration pass is in flight.
Quantization back to 8 bits happens only at serialization time (or explicitly
via quantize()).
"""

from __future__ import annotations

import numpy as np

_WHITESPACE = b" \t\n\r\v\f"


class PgmParseError(ValueError):
    """A PGM byte stream could not be parsed; the message names the bad field."""


def quantize(img: np.ndarray) -> np.ndarray:
    """Round to nearest integer (halves away from zero), clamp to [0, 255], uint8."""
    arr = np.asarray(img, dtype=np.float64)
    return np.clip(np.floor(arr + 0.5), 0.0, 255.0).astype(np.uint8)


def _next_token(data: bytes, pos: int, field: str) -> tuple[bytes, int]:
    n = len(data)
    while pos < n and data[pos : pos + 1] in _WHITESPACE:
        pos += 1
    start = pos
    while pos < n and data[pos : pos + 1] not in _WHITESPACE:
        pos += 1
    if start == pos:
        raise PgmParseError(f"missing {field} in PGM header")
    return data[start:pos], pos


def _int_token(data: bytes, pos: int, field: str) -> tuple[int, int]:
    tok, pos = _next_token(data, pos, field)
    try:
        return int(tok), pos
    except ValueError:
        raise PgmParseError(f"non-numeric {field} in PGM header: {tok!r}") from None


def read_pgm(data: bytes) -> np.ndarray:
    """Parse a binary PGM (P5) byte stream into a uint8 image.

    Header layout: magic "P5", width, height, maxval (must be 255), each
    separated by whitespace, then exactly one whitespace byte before the raw
    payload of width*height bytes.
    """
    magic, pos = _next_token(data, 0, "magic")
    if magic != b"P5":
        raise PgmParseError(f"bad magic {magic!r}; only binary PGM (P5) is supported")
    width, pos = _int_token(data, pos, "width")
    height, pos = _int_token(data, pos, "height")
    if width < 1 or height < 1:
        raise PgmParseError(f"bad dimensions {width}x{height}")
    maxval, pos = _int_token(data, pos, "maxval")
    if maxval != 255:
        raise PgmParseError(f"unsupported maxval {maxval}; only 8-bit (255) images")
    if pos >= len(data) or data[pos : pos + 1] not in _WHITESPACE:
        raise PgmParseError("missing whitespace between maxval and payload")
    pos += 1
    payload = data[pos : pos + width * height]
    if len(payload) < width * height:
        raise PgmParseError(
            f"truncated payload: expected {width * height} bytes, got {len(payload)}"
        )
    return np.frombuffer(payload, dtype=np.uint8).reshape(height, width).copy()


def write_pgm(img: np.ndarray) -> bytes:
    """Serialize an image as binary PGM (P5).

    Real-valued input is quantized to 8 bits first. The byte stream is
    deterministic: identical images yield identical bytes, and
    read_pgm(write_pgm(x)) == x for any integer-valued image.
    """
    arr = np.asarray(img)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D grayscale image, got shape {arr.shape}")
    arr = quantize(arr)
    height, width = arr.shape
    header = f"P5\n{width} {height}\n255\n".encode("ascii")
    return header + arr.tobytes()


def load_pgm(path) -> np.ndarray:
    with open(path, "rb") as fh:
        return read_pgm(fh.read())


def save_pgm(path, img: np.ndarray) -> None:
    with open(path, "wb") as fh:
        fh.write(write_pgm(img))
