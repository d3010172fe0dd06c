"""Binary PGM (P5) and PPM (P6) with maxval 255."""

import os

import numpy as np

from .errors import FormatError
from .image import ImageRaster

_WHITESPACE = b" \t\r\n\v\f"


def _header_tokens(data, count):
    """First ``count`` header tokens and the offset of the raster."""
    tokens = []
    i = 0
    n = len(data)
    while len(tokens) < count:
        while i < n and data[i] in _WHITESPACE:
            i += 1
        if i < n and data[i] == ord("#"):
            while i < n and data[i] not in b"\r\n":
                i += 1
            continue
        start = i
        while i < n and data[i] not in _WHITESPACE and data[i] != ord("#"):
            i += 1
        if start == i:
            raise FormatError("truncated header")
        tokens.append(data[start:i])
    # exactly one whitespace byte separates maxval from the raster
    if i >= n or data[i] not in _WHITESPACE:
        raise FormatError("missing whitespace after maxval")
    return tokens, i + 1


def decode(data, source="<bytes>"):
    try:
        tokens, start = _header_tokens(data, 4)
    except FormatError as exc:
        raise FormatError(f"{source}: {exc}") from None
    magic = tokens[0]
    if magic == b"P5":
        channels = 1
    elif magic == b"P6":
        channels = 3
    else:
        raise FormatError(f"{source}: unsupported magic {magic!r} (need P5 or P6)")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise FormatError(f"{source}: non-numeric header field") from None
    if width < 1 or height < 1:
        raise FormatError(f"{source}: bad dimensions {width}x{height}")
    if maxval != 255:
        raise FormatError(f"{source}: maxval {maxval} unsupported (need 255)")
    need = width * height * channels
    raster = data[start:start + need]
    if len(raster) != need:
        raise FormatError(f"{source}: raster has {len(raster)} bytes, expected {need}")
    arr = np.frombuffer(raster, dtype=np.uint8).reshape(height, width, channels)
    return ImageRaster(arr.astype(np.float64) / 255.0)


def quantize(samples):
    """``round(clamp(x, 0, 1) * 255)`` with halves rounded away from zero."""
    scaled = np.clip(samples, 0.0, 1.0) * 255.0
    return np.floor(scaled + 0.5).astype(np.uint8)


def encode(img):
    magic = b"P5" if img.channels == 1 else b"P6"
    header = magic + f"\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + quantize(img.samples).tobytes()


def read_image(path):
    with open(path, "rb") as fh:
        return decode(fh.read(), source=os.fspath(path))


def write_image(path, img):
    with open(path, "wb") as fh:
        fh.write(encode(img))
