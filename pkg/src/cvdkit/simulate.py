"""Color-vision deficiency simulation.

Dichromacies are modeled as a single-plane projection in LMS space: the
deficient cone signal is replaced by a fixed linear combination of the two
intact cones, with coefficients solved so that the neutral axis is invariant
and, Vienot-style, one display primary stays fixed (blue for protan/deutan,
red for tritan). Anomalous trichromacies blend the original with the
projected color in linear RGB by a severity in [0, 1]; monochromacy renders
Rec. 709 luminance gray.

The full linear-RGB matrices below were composed from the RGB/LMS pair and
the projection in exact rational arithmetic, so their structural properties
(identical rows for the collapsed channels, exactly invariant white) hold
exactly in float64.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import color
from .color import PixelSrgb, apply_linear_matrix
from .errors import ValidationError
from .image import ImageBuffer


class Deficiency(enum.Enum):
    PROTANOPIA = "protanopia"
    DEUTERANOPIA = "deuteranopia"
    TRITANOPIA = "tritanopia"
    PROTANOMALY = "protanomaly"
    DEUTERANOMALY = "deuteranomaly"
    TRITANOMALY = "tritanomaly"
    MONOCHROMACY = "monochromacy"


_DICHROMACIES = {Deficiency.PROTANOPIA, Deficiency.DEUTERANOPIA, Deficiency.TRITANOPIA}
_ANOMALOUS_TO_DICHROMACY = {
    Deficiency.PROTANOMALY: Deficiency.PROTANOPIA,
    Deficiency.DEUTERANOMALY: Deficiency.DEUTERANOPIA,
    Deficiency.TRITANOMALY: Deficiency.TRITANOPIA,
}

# Replacement coefficients (a, b): the deficient cone value becomes
# a * first-intact + b * second-intact (M,S for protan; L,S for deutan;
# L,M for tritan).
PROJECTION_COEFFS = {
    Deficiency.PROTANOPIA: (1.0511829388821905, -0.051160990498682606),
    Deficiency.DEUTERANOPIA: (0.9513091993895777, 0.04866992091127954),
    Deficiency.TRITANOPIA: (-0.8674473631666542, 1.8672708946785685),
}

# Linear-RGB equivalents of decode -> LMS -> project -> LMS^-1.
_SIM_MATRICES = {
    Deficiency.PROTANOPIA: np.array([
        [0.1705569911353506, 0.8294430088646494, 0.0],
        [0.1705569911353506, 0.8294430088646494, 0.0],
        [-0.004517144247106231, 0.004517144247106231, 1.0],
    ]),
    Deficiency.DEUTERANOPIA: np.array([
        [0.33066007347512333, 0.6693399265248767, 0.0],
        [0.33066007347512333, 0.6693399265248767, 0.0],
        [-0.0278553825793318, 0.0278553825793318, 1.0],
    ]),
    Deficiency.TRITANOPIA: np.array([
        [1.0, 0.12739886336687878, -0.12739886336687878],
        [0.0, 0.8739092990281622, 0.12609070097183783],
        [0.0, 0.8739092990281622, 0.12609070097183783],
    ]),
    Deficiency.MONOCHROMACY: np.array([
        [0.2126, 0.7152, 0.0722],
        [0.2126, 0.7152, 0.0722],
        [0.2126, 0.7152, 0.0722],
    ]),
}


@dataclass(frozen=True)
class DeficiencyProfile:
    kind: Deficiency
    severity: float = 1.0

    def __post_init__(self):
        s = float(self.severity)
        if not 0.0 <= s <= 1.0:
            raise ValidationError("bad_severity", "severity must be in [0, 1]", field="severity")
        if self.kind in _DICHROMACIES or self.kind is Deficiency.MONOCHROMACY:
            s = 1.0
        object.__setattr__(self, "severity", s)

    @classmethod
    def parse(cls, kind: str, severity: float | None = None) -> "DeficiencyProfile":
        try:
            k = Deficiency(str(kind).strip().lower())
        except ValueError:
            raise ValidationError(
                "bad_kind",
                f"unknown deficiency kind {kind!r}; expected one of "
                + ", ".join(d.value for d in Deficiency),
                field="kind",
            ) from None
        return cls(k, 1.0 if severity is None else float(severity))


def _matrix_and_severity(prof: DeficiencyProfile) -> tuple[np.ndarray, float]:
    base = _ANOMALOUS_TO_DICHROMACY.get(prof.kind)
    if base is not None:
        return _SIM_MATRICES[base], prof.severity
    return _SIM_MATRICES[prof.kind], 1.0


def simulate_image(img: ImageBuffer, prof: DeficiencyProfile) -> ImageBuffer:
    """Render the whole image as seen under the given deficiency."""
    matrix, severity = _matrix_and_severity(prof)
    return ImageBuffer(apply_linear_matrix(img.data, matrix, severity))


def simulate_pixel(p, prof: DeficiencyProfile) -> PixelSrgb:
    """Single-pixel form of simulate_image (same code path, 1x1 image)."""
    matrix, severity = _matrix_and_severity(prof)
    data = np.array(tuple(p), dtype=np.uint8).reshape(1, 1, 3)
    out = apply_linear_matrix(data, matrix, severity)[0, 0]
    return PixelSrgb(int(out[0]), int(out[1]), int(out[2]))


def confusion_distance(p, prof: DeficiencyProfile) -> float:
    """How much the deficiency changes this color, as a Lab delta-E."""
    return color.delta_e(color.rgb_to_lab(tuple(p)), color.rgb_to_lab(simulate_pixel(p, prof)))


def confusion_field(img: ImageBuffer, prof: DeficiencyProfile) -> np.ndarray:
    """Per-pixel confusion_distance as a float64 (h, w) array."""
    lab_orig = color.lab_image(img.data)
    lab_sim = color.lab_image(simulate_image(img, prof).data)
    return np.linalg.norm(lab_sim - lab_orig, axis=-1)
