"""Tetrachromatic / pentachromatic augmentation.

Fuses single-channel UV or IR band images into the visible rendering as a
false-color overlay: per pixel a convex blend in linear RGB between the
visible color and a display tint, weighted by mix times the band intensity.
UV fuses before IR so composition is deterministic.

The stored IR default peak is 630 nm, which actually sits inside the visible
red band; it is kept as given but is most likely meant to be a near-IR value.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import color
from .errors import ValidationError
from .image import ImageBuffer
from .spectral import ConeClass

UV_DEFAULT_PEAK_NM = 370.0
IR_DEFAULT_PEAK_NM = 630.0
UV_DISPLAY_COLOR = (130, 0, 255)
IR_DISPLAY_COLOR = (255, 40, 40)


@dataclass(frozen=True)
class BandImage:
    band: ConeClass
    data: np.ndarray  # (h, w) uint8 intensities
    peak_nm: float | None = None

    def __post_init__(self):
        if self.band not in (ConeClass.UV, ConeClass.IR):
            raise ValidationError("bad_band", "band must be UV or IR", field="band")
        data = np.asarray(self.data, dtype=np.uint8)
        if data.ndim != 2:
            raise ValidationError("bad_band", "band data must be a single-channel array", field="data")
        object.__setattr__(self, "data", data)
        if self.peak_nm is None:
            peak = UV_DEFAULT_PEAK_NM if self.band is ConeClass.UV else IR_DEFAULT_PEAK_NM
            object.__setattr__(self, "peak_nm", peak)

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]


@dataclass(frozen=True)
class AugmentConfig:
    uv_enabled: bool = False
    ir_enabled: bool = False
    mix: float = 0.5
    uv_display_color: tuple = UV_DISPLAY_COLOR
    ir_display_color: tuple = IR_DISPLAY_COLOR

    def __post_init__(self):
        if not 0.0 <= self.mix <= 1.0:
            raise ValidationError("bad_mix", "mix must be in [0, 1]", field="mix")

    def enabled_for(self, band: ConeClass) -> bool:
        return self.uv_enabled if band is ConeClass.UV else self.ir_enabled

    def display_color(self, band: ConeClass) -> tuple:
        return self.uv_display_color if band is ConeClass.UV else self.ir_display_color


def fuse_band(img: ImageBuffer, band: BandImage, cfg: AugmentConfig) -> ImageBuffer:
    """Blend one band into the visible image; identity when its flag is off."""
    if not cfg.enabled_for(band.band):
        return img.copy()
    if (band.height, band.width) != (img.height, img.width):
        raise ValidationError("dimension_mismatch", "band dimensions must match the image")
    w = (cfg.mix / 255.0) * band.data.astype(np.float64)
    w = w[:, :, np.newaxis]
    lin = color.decode_image(img.data)
    tint = np.array(color.srgb_decode(cfg.display_color(band.band)))
    fused = (1.0 - w) * lin + w * tint
    return ImageBuffer(color.encode_image(fused))


def fuse_pentachromatic(img: ImageBuffer, uv: BandImage, ir: BandImage, cfg: AugmentConfig) -> ImageBuffer:
    """Fuse UV then IR, in that fixed order."""
    return fuse_band(fuse_band(img, uv, cfg), ir, cfg)
