"""Synthetic pseudoisochromatic plates and a quantitative legibility metric.

A plate is a disc packed with non-overlapping random dots; dots whose center
falls inside the digit glyph take figure-palette colors, the rest take
ground-palette colors. Packing uses rejection sampling with radii tried in
descending order (polydisperse packing comfortably clears the required 60%
disc coverage where equal-size rejection sampling would jam near 55%).

Randomness comes from a 64-bit linear congruential generator with fixed,
documented constants, so identical specs produce bit-identical plates on any
platform.

Legibility of a (possibly transformed) plate is the delta-E between the mean
Lab color of the figure-dot pixels and of the ground-dot pixels; >= 10 reads
as legible, < 5 as invisible, in between as indeterminate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from . import color
from .errors import ValidationError
from .image import ImageBuffer, RegionMask

# Knuth's MMIX multiplier/increment, modulus 2**64.
LCG_MULTIPLIER = 6364136223846793005
LCG_INCREMENT = 1442695040888963407
_MASK64 = (1 << 64) - 1


class Lcg64:
    """Deterministic 64-bit linear congruential generator."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state * LCG_MULTIPLIER + LCG_INCREMENT) & _MASK64
        return self.state

    def next_float(self) -> float:
        # top 53 bits -> [0, 1)
        return (self.next_u64() >> 11) / 9007199254740992.0

    def next_below(self, n: int) -> int:
        return self.next_u64() % n


FONT_5X7 = {
    0: (" ### ", "#   #", "#  ##", "# # #", "##  #", "#   #", " ### "),
    1: ("  #  ", " ##  ", "  #  ", "  #  ", "  #  ", "  #  ", " ### "),
    2: (" ### ", "#   #", "    #", "   # ", "  #  ", " #   ", "#####"),
    3: (" ### ", "#   #", "    #", "  ## ", "    #", "#   #", " ### "),
    4: ("   # ", "  ## ", " # # ", "#  # ", "#####", "   # ", "   # "),
    5: ("#####", "#    ", "#### ", "    #", "    #", "#   #", " ### "),
    6: (" ### ", "#    ", "#    ", "#### ", "#   #", "#   #", " ### "),
    7: ("#####", "    #", "   # ", "  #  ", " #   ", " #   ", " #   "),
    8: (" ### ", "#   #", "#   #", " ### ", "#   #", "#   #", " ### "),
    9: (" ### ", "#   #", "#   #", " ####", "    #", "    #", " ### "),
}

# Protan confusion pair: both families project to nearly the same color under
# the protanopia simulation (post-simulation pairwise delta-E ~ 0.5) while
# differing by ~51 delta-E and >= 64 red-channel steps before it. Family
# members are spaced along the protan confusion axis.
PROTAN_FIGURE_PALETTE = ((223, 95, 60), (230, 90, 60), (237, 85, 60))
PROTAN_GROUND_PALETTE = ((140, 127, 58), (150, 124, 58), (159, 121, 58))

PRESET_PALETTES = {
    "protan": (PROTAN_FIGURE_PALETTE, PROTAN_GROUND_PALETTE),
}

PLATE_BACKGROUND = (245, 243, 235)

LEGIBLE_THRESHOLD = 10.0
INVISIBLE_THRESHOLD = 5.0

_MIN_COVERAGE = 0.60
_TARGET_COVERAGE = 0.68
_DOT_GAP = 1.0


class Dot(NamedTuple):
    x: float
    y: float
    radius: float
    is_figure: bool
    color: tuple


@dataclass(frozen=True)
class PlateSpec:
    digit: int
    seed: int
    size_px: int = 480
    figure_palette: Sequence = PROTAN_FIGURE_PALETTE
    ground_palette: Sequence = PROTAN_GROUND_PALETTE
    dot_radius_range: tuple = (4, 13)

    def __post_init__(self):
        if self.digit not in FONT_5X7:
            raise ValidationError("bad_digit", "digit must be 0..9", field="digit")
        if self.size_px < 64:
            raise ValidationError("bad_plate_size", "size_px must be >= 64", field="size_px")
        if not self.figure_palette or not self.ground_palette:
            raise ValidationError("bad_palette", "palettes must be non-empty")
        lo, hi = self.dot_radius_range
        if lo < 2 or lo > hi:
            raise ValidationError("bad_radius_range", "need 2 <= min radius <= max radius",
                                  field="dot_radius_range")
        if hi >= self.size_px / 4:
            raise ValidationError("coverage_unreachable",
                                  "max dot radius too large for the plate size",
                                  field="dot_radius_range")


@dataclass(frozen=True)
class Plate:
    image: ImageBuffer
    figure_mask: RegionMask
    ground_mask: RegionMask
    dots: tuple = field(default_factory=tuple)


@dataclass(frozen=True)
class LegibilityReport:
    score: float
    legible: bool

    @property
    def verdict(self) -> str:
        if self.score >= LEGIBLE_THRESHOLD:
            return "legible"
        if self.score < INVISIBLE_THRESHOLD:
            return "invisible"
        return "indeterminate"

    def as_dict(self) -> dict:
        return {"score": self.score, "legible": self.legible, "verdict": self.verdict}


def _glyph_test(spec: PlateSpec):
    glyph = FONT_5X7[spec.digit]
    gw = 0.50 * spec.size_px
    gh = 0.70 * spec.size_px
    gx0 = (spec.size_px - gw) / 2.0
    gy0 = (spec.size_px - gh) / 2.0
    cw = gw / 5.0
    ch = gh / 7.0

    def hit(x: float, y: float) -> bool:
        col = int((x - gx0) // cw)
        row = int((y - gy0) // ch)
        if 0 <= col < 5 and 0 <= row < 7:
            return glyph[row][col] == "#"
        return False

    return hit


def generate_plate(spec: PlateSpec) -> Plate:
    """Pack the plate disc with dots; deterministic for a given spec."""
    size = spec.size_px
    cx = cy = (size - 1) / 2.0
    disc_r = size / 2.0 - 2.0
    rng = Lcg64(spec.seed)
    hit = _glyph_test(spec)

    rmin, rmax = spec.dot_radius_range
    cell = 2.0 * rmax + _DOT_GAP
    grid: dict[tuple[int, int], list[int]] = {}
    xs: list[float] = []
    ys: list[float] = []
    rs: list[float] = []

    area = 0.0
    disc_area = disc_r * disc_r
    placed_any = True

    def fits(x: float, y: float, r: float) -> bool:
        gx, gy = int(x / cell), int(y / cell)
        for nx in (gx - 1, gx, gx + 1):
            for ny in (gy - 1, gy, gy + 1):
                for i in grid.get((nx, ny), ()):
                    dx = xs[i] - x
                    dy = ys[i] - y
                    lim = rs[i] + r + _DOT_GAP
                    if dx * dx + dy * dy < lim * lim:
                        return False
        return True

    dots: list[Dot] = []
    for r in range(rmax, rmin - 1, -1):
        misses = 0
        reach = disc_r - r
        while misses < 400 and area < _TARGET_COVERAGE * disc_area:
            x = cx + (2.0 * rng.next_float() - 1.0) * reach
            y = cy + (2.0 * rng.next_float() - 1.0) * reach
            dx, dy = x - cx, y - cy
            if dx * dx + dy * dy > reach * reach or not fits(x, y, r):
                misses += 1
                continue
            i = len(xs)
            xs.append(x)
            ys.append(y)
            rs.append(float(r))
            grid.setdefault((int(x / cell), int(y / cell)), []).append(i)
            fig = hit(x, y)
            pal = spec.figure_palette if fig else spec.ground_palette
            c = tuple(pal[rng.next_below(len(pal))])
            dots.append(Dot(x, y, float(r), fig, c))
            area += r * r
            misses = 0

    if area < _MIN_COVERAGE * disc_area:
        raise ValidationError(
            "coverage_unreachable",
            f"dot coverage {area / disc_area:.0%} below the required 60%",
        )

    img = np.empty((size, size, 3), dtype=np.uint8)
    img[:, :] = np.asarray(PLATE_BACKGROUND, dtype=np.uint8)
    fig_bits = np.zeros((size, size), dtype=bool)
    gnd_bits = np.zeros((size, size), dtype=bool)
    for d in dots:
        x0 = max(0, int(math.floor(d.x - d.radius)))
        x1 = min(size - 1, int(math.ceil(d.x + d.radius)))
        y0 = max(0, int(math.floor(d.y - d.radius)))
        y1 = min(size - 1, int(math.ceil(d.y + d.radius)))
        yy, xx = np.mgrid[y0:y1 + 1, x0:x1 + 1]
        m = (xx - d.x) ** 2 + (yy - d.y) ** 2 <= d.radius * d.radius
        img[y0:y1 + 1, x0:x1 + 1][m] = np.asarray(d.color, dtype=np.uint8)
        (fig_bits if d.is_figure else gnd_bits)[y0:y1 + 1, x0:x1 + 1][m] = True

    return Plate(ImageBuffer(img), RegionMask(fig_bits), RegionMask(gnd_bits), tuple(dots))


def legibility(plate: Plate, transform: Callable[[ImageBuffer], ImageBuffer]) -> LegibilityReport:
    """Score how distinguishable the digit stays after `transform`."""
    out = transform(plate.image)
    if (out.height, out.width) != (plate.image.height, plate.image.width):
        raise ValidationError("dimension_mismatch", "transform changed the image dimensions")
    lab = color.lab_image(out.data)
    fig = lab[plate.figure_mask.bits]
    gnd = lab[plate.ground_mask.bits]
    if fig.size == 0 or gnd.size == 0:
        raise ValidationError("empty_population", "plate has no figure or no ground pixels")
    score = float(np.linalg.norm(fig.mean(axis=0) - gnd.mean(axis=0)))
    return LegibilityReport(score=score, legible=score >= LEGIBLE_THRESHOLD)


def protan_plate_spec(digit: int, seed: int, size_px: int = 480) -> PlateSpec:
    fig, gnd = PRESET_PALETTES["protan"]
    return PlateSpec(digit=digit, seed=seed, size_px=size_px,
                     figure_palette=fig, ground_palette=gnd)
