"""Correction and assistance operators.

Passive transforms (red-channel grayscale, desaturation, green-attenuating
filter, masked luminance gain) plus the active modifiers (confusion mask,
blink overlay, border enhancement along confusable edges). Operators are
pure given (image, params, t_ms); time is always an explicit input.

Recipes compose operators left to right and are serialized as a JSON list of
{"op": name, "params": {...}} objects; see OPERATOR_DEFAULTS for the
documented parameter names and defaults.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import color
from .errors import RecipeStepError, ValidationError
from .image import ImageBuffer, RegionMask
from .simulate import DeficiencyProfile, confusion_field

DEFAULT_CONFUSION_TAU = 10.0
DEFAULT_EQUALIZE_GAIN = 1.3
DEFAULT_GREEN_ATTENUATION = 0.2
DEFAULT_EDGE_THRESHOLD = 8.0
DEFAULT_EDGE_COLOR = (255, 255, 0)
DEFAULT_BLINK_PERIOD_MS = 1000.0
DEFAULT_BLINK_HIGHLIGHT = (255, 0, 255)


@dataclass(frozen=True)
class BlinkState:
    period_ms: float = DEFAULT_BLINK_PERIOD_MS
    t_ms: float = 0.0

    def __post_init__(self):
        if self.period_ms <= 0:
            raise ValidationError("bad_period", "blink period_ms must be > 0", field="period_ms")

    def is_on(self) -> bool:
        return math.floor(2.0 * self.t_ms / self.period_ms) % 2 == 0


def red_channel_grayscale(img: ImageBuffer) -> ImageBuffer:
    """Replace every pixel by the gray of its red component."""
    out = np.repeat(img.data[:, :, 0:1], 3, axis=2)
    return ImageBuffer(out)


def desaturate_helper(img: ImageBuffer) -> ImageBuffer:
    """HSV saturation to zero. With s=0 every channel collapses to the value
    (max) channel, so no float conversion is needed."""
    mx = img.data.max(axis=2)
    return ImageBuffer(np.repeat(mx[:, :, np.newaxis], 3, axis=2))


def luminance_equalize(
    img: ImageBuffer,
    prof: DeficiencyProfile,
    gain: float = DEFAULT_EQUALIZE_GAIN,
    tau: float = DEFAULT_CONFUSION_TAU,
) -> ImageBuffer:
    """Boost HSV value by `gain` on pixels the deficiency confuses more than
    `tau` delta-E; leave everything else untouched."""
    if not 1.0 <= gain <= 3.0:
        raise ValidationError("bad_gain", "gain must be in [1, 3]", field="gain")
    mask = confusion_field(img, prof) > tau
    if gain == 1.0 or not mask.any():
        return img.copy()
    h, s, v = color.rgb_to_hsv_image(img.data)
    v = np.where(mask, np.minimum(v * gain, 1.0), v)
    boosted = color.hsv_to_rgb_image(h, s, v)
    out = np.where(mask[:, :, np.newaxis], boosted, img.data)
    return ImageBuffer(out.astype(np.uint8))


def passive_filter(img: ImageBuffer, green_attenuation: float = DEFAULT_GREEN_ATTENUATION) -> ImageBuffer:
    """Attenuate the green channel in linear light (Oxy-Iso style lens)."""
    if not 0.0 <= green_attenuation <= 1.0:
        raise ValidationError("bad_attenuation", "green_attenuation must be in [0, 1]",
                              field="green_attenuation")
    m = np.diag([1.0, float(green_attenuation), 1.0])
    return ImageBuffer(color.apply_linear_matrix(img.data, m))


def confusion_mask(img: ImageBuffer, prof: DeficiencyProfile, tau: float = DEFAULT_CONFUSION_TAU) -> RegionMask:
    """Pixels whose confusion_distance exceeds tau."""
    if tau <= 0:
        raise ValidationError("bad_tau", "tau must be > 0", field="tau")
    return RegionMask(confusion_field(img, prof) > tau)


def blink_overlay(img: ImageBuffer, mask: RegionMask, state: BlinkState, highlight) -> ImageBuffer:
    """Replace masked pixels by the highlight color during the on half-period."""
    if not mask.matches(img):
        raise ValidationError("dimension_mismatch", "mask dimensions must match the image")
    if not state.is_on():
        return img.copy()
    out = img.data.copy()
    out[mask.bits] = np.asarray(tuple(highlight), dtype=np.uint8)
    return ImageBuffer(out)


def _sobel_magnitude(f: np.ndarray) -> np.ndarray:
    # 3x3 Sobel pair, replicate-padded, normalized by 1/4 so a unit step edge
    # produces magnitude ~1 regardless of orientation.
    p = np.pad(f, 1, mode="edge")
    gx = (
        (p[:-2, 2:] + 2.0 * p[1:-1, 2:] + p[2:, 2:])
        - (p[:-2, :-2] + 2.0 * p[1:-1, :-2] + p[2:, :-2])
    ) / 4.0
    gy = (
        (p[2:, :-2] + 2.0 * p[2:, 1:-1] + p[2:, 2:])
        - (p[:-2, :-2] + 2.0 * p[:-2, 1:-1] + p[:-2, 2:])
    ) / 4.0
    return np.hypot(gx, gy)


def edge_enhance_confusable(
    img: ImageBuffer,
    prof: DeficiencyProfile,
    edge_color=DEFAULT_EDGE_COLOR,
    threshold: float = DEFAULT_EDGE_THRESHOLD,
) -> ImageBuffer:
    """Draw edge_color where the confusion field has a strong gradient."""
    if threshold <= 0:
        raise ValidationError("bad_threshold", "threshold must be > 0", field="threshold")
    c = confusion_field(img, prof)
    edges = _sobel_magnitude(c) > threshold
    out = img.data.copy()
    out[edges] = np.asarray(tuple(edge_color), dtype=np.uint8)
    return ImageBuffer(out)


# --- recipes ------------------------------------------------------------------

@dataclass(frozen=True)
class RecipeStep:
    op: str
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class CorrectionRecipe:
    steps: tuple[RecipeStep, ...] = ()

    @classmethod
    def from_steps(cls, steps) -> "CorrectionRecipe":
        return cls(tuple(RecipeStep(s.op, dict(s.params)) if isinstance(s, RecipeStep)
                         else RecipeStep(str(s[0]), dict(s[1]) if len(s) > 1 else {})
                         for s in steps))

    def __len__(self) -> int:
        return len(self.steps)


OPERATOR_DEFAULTS = {
    "red_gray": {},
    "desaturate": {},
    "luminance_equalize": {"gain": DEFAULT_EQUALIZE_GAIN, "tau": DEFAULT_CONFUSION_TAU},
    "passive_filter": {"green_attenuation": DEFAULT_GREEN_ATTENUATION},
    "blink": {
        "period_ms": DEFAULT_BLINK_PERIOD_MS,
        "tau": DEFAULT_CONFUSION_TAU,
        "highlight": list(DEFAULT_BLINK_HIGHLIGHT),
    },
    "edge_enhance": {
        "threshold": DEFAULT_EDGE_THRESHOLD,
        "edge_color": list(DEFAULT_EDGE_COLOR),
    },
}

_PROFILE_REQUIRED = {"luminance_equalize", "blink", "edge_enhance"}


def _color_param(value, name: str) -> tuple:
    try:
        r, g, b = (int(v) for v in value)
    except (TypeError, ValueError):
        raise ValidationError("bad_color", f"{name} must be an [r, g, b] triple", field=name) from None
    if not all(0 <= v <= 255 for v in (r, g, b)):
        raise ValidationError("bad_color", f"{name} channels must be in [0, 255]", field=name)
    return (r, g, b)


def validate_step(step: RecipeStep) -> None:
    """Check the op name and parameter names; raises ValidationError."""
    if step.op not in OPERATOR_DEFAULTS:
        raise ValidationError("unknown_operator", f"unknown operator {step.op!r}", field="op")
    allowed = OPERATOR_DEFAULTS[step.op]
    for key in step.params:
        if key not in allowed:
            raise ValidationError(
                "bad_param", f"operator {step.op!r} does not accept parameter {key!r}", field=key
            )


def _apply_step(img: ImageBuffer, step: RecipeStep, prof: DeficiencyProfile | None, t_ms: float) -> ImageBuffer:
    validate_step(step)
    if step.op in _PROFILE_REQUIRED and prof is None:
        raise ValidationError(
            "profile_required", f"operator {step.op!r} needs a deficiency profile", field="profile"
        )
    p = {**OPERATOR_DEFAULTS[step.op], **step.params}
    if step.op == "red_gray":
        return red_channel_grayscale(img)
    if step.op == "desaturate":
        return desaturate_helper(img)
    if step.op == "luminance_equalize":
        return luminance_equalize(img, prof, gain=float(p["gain"]), tau=float(p["tau"]))
    if step.op == "passive_filter":
        return passive_filter(img, green_attenuation=float(p["green_attenuation"]))
    if step.op == "blink":
        mask = confusion_mask(img, prof, tau=float(p["tau"]))
        state = BlinkState(period_ms=float(p["period_ms"]), t_ms=t_ms)
        return blink_overlay(img, mask, state, _color_param(p["highlight"], "highlight"))
    if step.op == "edge_enhance":
        return edge_enhance_confusable(
            img, prof,
            edge_color=_color_param(p["edge_color"], "edge_color"),
            threshold=float(p["threshold"]),
        )
    raise AssertionError(step.op)


def apply_recipe(
    img: ImageBuffer,
    recipe: CorrectionRecipe,
    prof: DeficiencyProfile | None = None,
    t_ms: float = 0.0,
) -> ImageBuffer:
    """Fold the recipe's operators over the image, left to right."""
    out = img
    for i, step in enumerate(recipe.steps):
        try:
            out = _apply_step(out, step, prof, t_ms)
        except ValidationError as exc:
            if isinstance(exc, RecipeStepError):
                raise
            raise RecipeStepError(i, step.op, exc) from exc
    return out
