"""Per-operator throughput benchmark on a deterministic synthetic image."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import correct
from .errors import ValidationError
from .image import ImageBuffer
from .simulate import Deficiency, DeficiencyProfile, simulate_image


@dataclass(frozen=True)
class BenchReport:
    operator: str
    width: int
    height: int
    iterations: int
    ms_per_frame: float
    megapixels_per_s: float

    def machine_line(self) -> str:
        return (f"bench,{self.operator},{self.width}x{self.height},"
                f"{self.ms_per_frame:.3f},{self.megapixels_per_s:.2f}")


def make_bench_image(width: int, height: int) -> ImageBuffer:
    """Deterministic colorful test pattern (no RNG, no file I/O)."""
    x = np.arange(width, dtype=np.uint32)
    y = np.arange(height, dtype=np.uint32)[:, None]
    data = np.empty((height, width, 3), dtype=np.uint8)
    data[..., 0] = ((x * 7 + y * 3) % 256).astype(np.uint8)
    data[..., 1] = ((x * 5 ^ y * 11) % 256).astype(np.uint8)
    data[..., 2] = ((x * 13 + y * 17 + 31) % 256).astype(np.uint8)
    return ImageBuffer(data)


def _operator_fn(name: str):
    if name == "identity":
        return lambda img: img.copy()
    if name.startswith("simulate/"):
        prof = DeficiencyProfile.parse(name.split("/", 1)[1])
        return lambda img: simulate_image(img, prof)
    if name == "red_gray":
        return correct.red_channel_grayscale
    if name == "desaturate":
        return correct.desaturate_helper
    if name == "passive_filter":
        return lambda img: correct.passive_filter(img)
    if name == "luminance_equalize":
        prof = DeficiencyProfile(Deficiency.PROTANOPIA)
        return lambda img: correct.luminance_equalize(img, prof)
    if name == "edge_enhance":
        prof = DeficiencyProfile(Deficiency.PROTANOPIA)
        return lambda img: correct.edge_enhance_confusable(img, prof)
    raise ValidationError("unknown_operator", f"unknown bench operator {name!r}", field="operator")


BENCH_OPERATORS = ("identity", "red_gray", "desaturate", "passive_filter",
                   "luminance_equalize", "edge_enhance") + tuple(
    f"simulate/{d.value}" for d in Deficiency)


def bench(operator: str, width: int, height: int, iterations: int = 30) -> BenchReport:
    """Median wall time per frame over `iterations` runs."""
    if iterations < 10:
        raise ValidationError("bad_iterations", "iterations must be >= 10", field="iterations")
    fn = _operator_fn(operator)
    img = make_bench_image(width, height)
    fn(img)  # warmup (first numba call may compile)
    times = []
    for _ in range(iterations):
        t0 = time.perf_counter()
        fn(img)
        times.append(time.perf_counter() - t0)
    median_s = float(np.median(times))
    mp = width * height / 1e6
    return BenchReport(
        operator=operator,
        width=width,
        height=height,
        iterations=iterations,
        ms_per_frame=median_s * 1000.0,
        megapixels_per_s=mp / median_s if median_s > 0 else float("inf"),
    )
