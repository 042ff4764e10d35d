"""Core color representations and conversions.

Everything downstream (simulation, correction, plates, the service) is built
on the conversions in this module: sRGB transfer functions, the RGB/LMS
matrix pair, HSV, CIELAB and the delta-E metric.

Per-pixel math is float64 throughout; quantization to 8 bits happens only at
the sRGB encode step. Encoding is table-driven: instead of evaluating the
inverse transfer function per pixel, we precompute the linear-light boundary
between every pair of adjacent 8-bit codes (the value that would round
half-way) and count boundaries <= c. That is exactly "clamp, inverse EOTF,
round half away from zero", with no transcendental calls in image loops.
"""

from __future__ import annotations

import math
from typing import NamedTuple, Sequence

import numpy as np
from numba import njit


class PixelSrgb(NamedTuple):
    r: int
    g: int
    b: int


class LinearRgb(NamedTuple):
    r: float
    g: float
    b: float


class LmsTriple(NamedTuple):
    l: float
    m: float
    s: float


class HsvTriple(NamedTuple):
    h: float  # degrees, [0, 360)
    s: float  # [0, 1]
    v: float  # [0, 1]


class LabTriple(NamedTuple):
    l_star: float
    a_star: float
    b_star: float


# --- sRGB transfer function -------------------------------------------------

def _eotf(u: float) -> float:
    """Display-encoded value in [0, 1] to linear light."""
    if u <= 0.04045:
        return u / 12.92
    return ((u + 0.055) / 1.055) ** 2.4


SRGB_DECODE_TABLE = np.array([_eotf(v / 255.0) for v in range(256)], dtype=np.float64)

# ENCODE_BOUNDS[k-1] is the linear value that encodes exactly half-way between
# codes k-1 and k; a linear value c maps to code "number of bounds <= c".
ENCODE_BOUNDS = np.array([_eotf((k - 0.5) / 255.0) for k in range(1, 256)], dtype=np.float64)

# Two-stage direct-index quantizer. Cell width 1/4096 is below the minimum
# boundary spacing (1/(255*12.92) ~ 3.04e-4), so each cell contains at most
# one boundary: code(c) = _QUANT_LO[cell] + (c >= _QUANT_HI[cell]).
_QUANT_N = 4096
_QUANT_LO = np.empty(_QUANT_N + 1, dtype=np.uint8)
_QUANT_HI = np.empty(_QUANT_N + 1, dtype=np.float64)
for _j in range(_QUANT_N + 1):
    _k = int(np.searchsorted(ENCODE_BOUNDS, _j / _QUANT_N, side="right"))
    _QUANT_LO[_j] = _k
    _QUANT_HI[_j] = ENCODE_BOUNDS[_k] if _k < 255 else 2.0
del _j, _k


def srgb_decode(p: Sequence[int]) -> LinearRgb:
    """8-bit display sRGB to linear light."""
    r, g, b = p
    return LinearRgb(SRGB_DECODE_TABLE[r], SRGB_DECODE_TABLE[g], SRGB_DECODE_TABLE[b])


def _encode_channel(c: float) -> int:
    if c <= 0.0:
        return 0
    if c >= 1.0:
        return 255
    return int(np.searchsorted(ENCODE_BOUNDS, c, side="right"))


def srgb_encode(c: Sequence[float]) -> PixelSrgb:
    """Linear light to 8-bit display sRGB; clamps out-of-gamut values."""
    r, g, b = c
    return PixelSrgb(_encode_channel(r), _encode_channel(g), _encode_channel(b))


def decode_image(data: np.ndarray) -> np.ndarray:
    """uint8 (h, w, 3) to linear-light float64."""
    return SRGB_DECODE_TABLE.take(data)


def encode_image(lin: np.ndarray) -> np.ndarray:
    """Linear-light float array to uint8, clamping to [0, 1] first."""
    c = np.clip(lin, 0.0, 1.0)
    idx = (c * _QUANT_N).astype(np.int32)
    out = _QUANT_LO.take(idx)
    out += c >= _QUANT_HI.take(idx)
    return out


# --- RGB <-> LMS ------------------------------------------------------------

# Hunt-Pointer-Estevez cone matrix normalized to D65, composed with the
# standard sRGB-to-XYZ (D65) matrix; linear RGB white maps to LMS ~ (1,1,1).
# The inverse was derived once in exact rational arithmetic and embedded.
RGB_TO_LMS_MATRIX = np.array([
    [0.3139902162, 0.63951293834, 0.04649754622],
    [0.15537240628, 0.75789446163, 0.08670141862],
    [0.01775238698, 0.1094420944, 0.87256922462],
])

LMS_TO_RGB_MATRIX = np.array([
    [5.472212058380288, -4.641960098354472, 0.16963707682797408],
    [-1.1252418955335697, 2.2931709380606238, -0.1678952022237088],
    [0.02980165117347024, -0.1931807282571404, 1.1636478927838123],
])


def rgb_to_lms(c: Sequence[float]) -> LmsTriple:
    r, g, b = c
    m = RGB_TO_LMS_MATRIX
    return LmsTriple(
        m[0, 0] * r + m[0, 1] * g + m[0, 2] * b,
        m[1, 0] * r + m[1, 1] * g + m[1, 2] * b,
        m[2, 0] * r + m[2, 1] * g + m[2, 2] * b,
    )


def lms_to_rgb(t: Sequence[float]) -> LinearRgb:
    l, m_, s = t
    m = LMS_TO_RGB_MATRIX
    return LinearRgb(
        m[0, 0] * l + m[0, 1] * m_ + m[0, 2] * s,
        m[1, 0] * l + m[1, 1] * m_ + m[1, 2] * s,
        m[2, 0] * l + m[2, 1] * m_ + m[2, 2] * s,
    )


# --- HSV --------------------------------------------------------------------

def rgb_to_hsv_image(data: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Hexcone HSV of a uint8 image; returns (h degrees, s, v) float arrays."""
    f = data.astype(np.float64)
    r, g, b = f[..., 0], f[..., 1], f[..., 2]
    mx = np.max(f, axis=-1)
    mn = np.min(f, axis=-1)
    d = mx - mn
    v = mx / 255.0
    s = np.divide(d, mx, out=np.zeros_like(mx), where=mx > 0)
    h = np.zeros_like(mx)
    nz = d > 0
    dn = np.where(nz, d, 1.0)
    rm = nz & (mx == r)
    gm = nz & ~rm & (mx == g)
    bm = nz & ~rm & ~gm
    h[rm] = 60.0 * ((g[rm] - b[rm]) / dn[rm])
    h[gm] = 60.0 * ((b[gm] - r[gm]) / dn[gm]) + 120.0
    h[bm] = 60.0 * ((r[bm] - g[bm]) / dn[bm]) + 240.0
    h %= 360.0
    return h, s, v


def hsv_to_rgb_image(h: np.ndarray, s: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Inverse hexcone conversion back to a uint8 image."""
    h = np.mod(h, 360.0) / 60.0
    c = v * s
    x = c * (1.0 - np.abs(np.mod(h, 2.0) - 1.0))
    m = v - c
    z = np.zeros_like(c)
    sector = np.minimum(h.astype(np.int64), 5)
    rp = np.choose(sector, [c, x, z, z, x, c])
    gp = np.choose(sector, [x, c, c, x, z, z])
    bp = np.choose(sector, [z, z, x, c, c, x])
    rgb = np.stack([rp + m, gp + m, bp + m], axis=-1)
    return np.floor(rgb * 255.0 + 0.5).astype(np.uint8)


def rgb_to_hsv(p: Sequence[int]) -> HsvTriple:
    arr = np.array(p, dtype=np.uint8).reshape(1, 1, 3)
    h, s, v = rgb_to_hsv_image(arr)
    return HsvTriple(float(h[0, 0]), float(s[0, 0]), float(v[0, 0]))


def hsv_to_rgb(hsv: Sequence[float]) -> PixelSrgb:
    h, s, v = hsv
    out = hsv_to_rgb_image(np.array([[h]]), np.array([[s]]), np.array([[v]]))
    return PixelSrgb(int(out[0, 0, 0]), int(out[0, 0, 1]), int(out[0, 0, 2]))


# --- CIELAB and delta-E -----------------------------------------------------

SRGB_TO_XYZ_MATRIX = np.array([
    [0.4124564, 0.3575761, 0.1804375],
    [0.2126729, 0.7151522, 0.0721750],
    [0.0193339, 0.1191920, 0.9503041],
])

D65_WHITE_XYZ = np.array([0.95047, 1.0, 1.08883])

_LAB_EPS = 216.0 / 24389.0
_LAB_KAPPA = 24389.0 / 27.0


def lab_image(data: np.ndarray) -> np.ndarray:
    """CIELAB (D65) of a uint8 image as a float64 (..., 3) array."""
    lin = decode_image(data)
    xyz = lin @ SRGB_TO_XYZ_MATRIX.T / D65_WHITE_XYZ
    f = np.where(xyz > _LAB_EPS, np.cbrt(xyz), (_LAB_KAPPA * xyz + 16.0) / 116.0)
    out = np.empty_like(f)
    out[..., 0] = 116.0 * f[..., 1] - 16.0
    out[..., 1] = 500.0 * (f[..., 0] - f[..., 1])
    out[..., 2] = 200.0 * (f[..., 1] - f[..., 2])
    return out


def rgb_to_lab(p: Sequence[int]) -> LabTriple:
    lab = lab_image(np.array(p, dtype=np.uint8).reshape(1, 1, 3))[0, 0]
    return LabTriple(float(lab[0]), float(lab[1]), float(lab[2]))


def delta_e(a: Sequence[float], b: Sequence[float]) -> float:
    """CIE76 color difference: Euclidean distance in Lab."""
    return math.dist(tuple(a), tuple(b))


# --- luminance --------------------------------------------------------------

# Rec. 709 weights on linear RGB.
LUMA_WEIGHTS = np.array([0.2126, 0.7152, 0.0722])


def luminance_image(data: np.ndarray) -> np.ndarray:
    """Linear-light luminance per pixel of a uint8 image."""
    return decode_image(data) @ LUMA_WEIGHTS


# --- fused pixel pipeline kernel ---------------------------------------------

@njit(cache=True)
def _linear_map_kernel(data, tables, dec, qlo, qhi, severity, out):  # pragma: no cover
    h, w = data.shape[0], data.shape[1]
    for y in range(h):
        for x in range(w):
            r = data[y, x, 0]
            g = data[y, x, 1]
            b = data[y, x, 2]
            for i in range(3):
                c = tables[i, 0, r] + tables[i, 1, g] + tables[i, 2, b]
                if severity != 1.0:
                    c = (1.0 - severity) * dec[data[y, x, i]] + severity * c
                if c < 0.0:
                    c = 0.0
                elif c > 1.0:
                    c = 1.0
                idx = int(c * 4096.0)
                k = qlo[idx]
                if c >= qhi[idx]:
                    k += 1
                out[y, x, i] = k
    return out


_TABLE_CACHE: dict[bytes, np.ndarray] = {}


def _premultiplied_tables(matrix: np.ndarray) -> np.ndarray:
    key = np.ascontiguousarray(matrix, dtype=np.float64).tobytes()
    tables = _TABLE_CACHE.get(key)
    if tables is None:
        tables = np.empty((3, 3, 256), dtype=np.float64)
        for i in range(3):
            for j in range(3):
                tables[i, j, :] = matrix[i][j] * SRGB_DECODE_TABLE
        _TABLE_CACHE[key] = tables
    return tables


def apply_linear_matrix(data: np.ndarray, matrix: np.ndarray, severity: float = 1.0) -> np.ndarray:
    """Decode, apply a 3x3 matrix in linear RGB, blend with the original by
    `severity`, clamp and re-encode. One fused pass over the image."""
    out = np.empty_like(data)
    _linear_map_kernel(
        np.ascontiguousarray(data),
        _premultiplied_tables(matrix),
        SRGB_DECODE_TABLE,
        _QUANT_LO,
        _QUANT_HI,
        float(severity),
        out,
    )
    return out
