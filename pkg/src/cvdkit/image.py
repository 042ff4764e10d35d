"""Image and mask containers plus PNG I/O.

An ImageBuffer is a thin wrapper over a row-major (height, width, 3) uint8
array of display sRGB pixels. PNG is the only raster format: 8-bit RGB(A) is
accepted on read (alpha dropped), plain 8-bit RGB is written.
"""

from __future__ import annotations

import io
from typing import Iterable, Sequence

import numpy as np
from PIL import Image, UnidentifiedImageError

from .color import PixelSrgb
from .errors import ValidationError


class ImageBuffer:
    """Row-major 8-bit sRGB raster."""

    __slots__ = ("data",)

    def __init__(self, data: np.ndarray):
        data = np.asarray(data)
        if data.ndim != 3 or data.shape[2] != 3 or data.dtype != np.uint8:
            raise ValidationError("bad_image", "image data must be a (h, w, 3) uint8 array")
        if data.shape[0] < 1 or data.shape[1] < 1:
            raise ValidationError("bad_dimensions", "image must be at least 1x1")
        self.data = data

    @classmethod
    def new(cls, width: int, height: int, fill: Sequence[int] = (0, 0, 0)) -> "ImageBuffer":
        data = np.empty((height, width, 3), dtype=np.uint8)
        data[:, :] = np.asarray(fill, dtype=np.uint8)
        return cls(data)

    @classmethod
    def from_pixels(cls, width: int, height: int, pixels: Iterable[Sequence[int]]) -> "ImageBuffer":
        arr = np.array(list(pixels), dtype=np.uint8).reshape(height, width, 3)
        return cls(arr)

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]

    def pixel(self, x: int, y: int) -> PixelSrgb:
        p = self.data[y, x]
        return PixelSrgb(int(p[0]), int(p[1]), int(p[2]))

    def copy(self) -> "ImageBuffer":
        return ImageBuffer(self.data.copy())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ImageBuffer):
            return NotImplemented
        return self.data.shape == other.data.shape and bool(np.array_equal(self.data, other.data))

    def __repr__(self) -> str:
        return f"ImageBuffer({self.width}x{self.height})"


class RegionMask:
    """One boolean per pixel, dimensions matching the image it annotates."""

    __slots__ = ("bits",)

    def __init__(self, bits: np.ndarray):
        bits = np.asarray(bits, dtype=bool)
        if bits.ndim != 2:
            raise ValidationError("bad_mask", "mask must be a 2-d boolean array")
        self.bits = bits

    @classmethod
    def empty(cls, width: int, height: int) -> "RegionMask":
        return cls(np.zeros((height, width), dtype=bool))

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    def count(self) -> int:
        return int(self.bits.sum())

    def matches(self, img: ImageBuffer) -> bool:
        return self.bits.shape == img.data.shape[:2]


def read_png(path: str) -> ImageBuffer:
    with Image.open(path) as im:
        return ImageBuffer(np.asarray(im.convert("RGB")))


def write_png(img: ImageBuffer, path: str) -> None:
    Image.fromarray(img.data, mode="RGB").save(path, format="PNG")


def encode_png_bytes(img: ImageBuffer) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(img.data, mode="RGB").save(buf, format="PNG")
    return buf.getvalue()


def decode_png_bytes(raw: bytes) -> ImageBuffer:
    try:
        with Image.open(io.BytesIO(raw)) as im:
            return ImageBuffer(np.asarray(im.convert("RGB")))
    except (UnidentifiedImageError, OSError) as exc:
        raise ValidationError("bad_image", f"cannot decode PNG payload: {exc}") from exc


def decode_png_gray_bytes(raw: bytes) -> np.ndarray:
    """Single-channel uint8 array from PNG bytes (converting if needed)."""
    try:
        with Image.open(io.BytesIO(raw)) as im:
            return np.asarray(im.convert("L"))
    except (UnidentifiedImageError, OSError) as exc:
        raise ValidationError("bad_image", f"cannot decode PNG payload: {exc}") from exc


def read_png_gray(path: str) -> np.ndarray:
    """Single-channel uint8 array from a PNG (converting if needed)."""
    with Image.open(path) as im:
        return np.asarray(im.convert("L"))


def write_png_gray(data: np.ndarray, path: str) -> None:
    Image.fromarray(np.asarray(data, dtype=np.uint8), mode="L").save(path, format="PNG")
