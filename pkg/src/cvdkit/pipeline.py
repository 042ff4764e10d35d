"""Shared frame-processing pipeline.

The CLI and the HTTP service both funnel into process_frame, so for any
(image, profile, recipe, layout, t_ms, bands) the two produce byte-identical
output.

Pane semantics: with `work` being the input after optional band fusion,
  single       -> [processed]          processed = corrected if a recipe was
  side_by_side -> [input, processed]   given, else simulated if a profile was
  triptych     -> [input, simulated, corrected]   given, else work
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .augment import AugmentConfig, BandImage, fuse_band
from .correct import OPERATOR_DEFAULTS, CorrectionRecipe, RecipeStep, apply_recipe, validate_step
from .errors import ValidationError
from .image import ImageBuffer
from .simulate import DeficiencyProfile, simulate_image
from .spectral import ConeClass

LAYOUTS = ("single", "side_by_side", "triptych")
GUTTER_COLOR = (18, 18, 18)
DEFAULT_GUTTER_PX = 8


def parse_layout(name: str) -> str:
    layout = str(name).strip().lower()
    if layout not in LAYOUTS:
        raise ValidationError("bad_layout", f"unknown layout {name!r}; expected one of {', '.join(LAYOUTS)}",
                              field="layout")
    return layout


def parse_recipe(obj) -> CorrectionRecipe:
    """Build a recipe from a parsed JSON list (or an already-built recipe)."""
    if isinstance(obj, CorrectionRecipe):
        recipe = obj
    else:
        if not isinstance(obj, list):
            raise ValidationError("bad_recipe", "recipe must be a JSON list of steps", field="recipe")
        steps = []
        for entry in obj:
            if isinstance(entry, str):
                steps.append(RecipeStep(entry))
                continue
            if not isinstance(entry, dict) or "op" not in entry:
                raise ValidationError("bad_recipe", "each step needs an 'op' name", field="recipe")
            params = entry.get("params", {})
            if not isinstance(params, dict):
                raise ValidationError("bad_recipe", "step params must be an object", field="recipe")
            steps.append(RecipeStep(str(entry["op"]), dict(params)))
        recipe = CorrectionRecipe(tuple(steps))
    for step in recipe.steps:
        validate_step(step)
    return recipe


def parse_recipe_json(text: str) -> CorrectionRecipe:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError("bad_recipe", f"recipe is not valid JSON: {exc}", field="recipe") from exc
    return parse_recipe(obj)


def _nearest_resize(img: ImageBuffer, width: int, height: int) -> ImageBuffer:
    ys = (np.arange(height) * img.height // height).astype(np.intp)
    xs = (np.arange(width) * img.width // width).astype(np.intp)
    return ImageBuffer(img.data[ys][:, xs])


def compose(images, layout: str = "side_by_side", gutter_px: int = DEFAULT_GUTTER_PX) -> ImageBuffer:
    """Concatenate panes horizontally with a dark gutter between them.

    Panes of differing height are nearest-neighbor resized to the tallest
    pane (widths scaled to preserve aspect); equal-height panes pass through
    byte-exact.
    """
    parse_layout(layout)
    images = list(images)
    if not images:
        raise ValidationError("bad_compose", "compose needs at least one image")
    if gutter_px < 0:
        raise ValidationError("bad_gutter", "gutter_px must be >= 0", field="gutter_px")
    if len(images) == 1:
        return images[0].copy()
    height = max(im.height for im in images)
    panes = []
    for im in images:
        if im.height != height:
            im = _nearest_resize(im, max(1, round(im.width * height / im.height)), height)
        panes.append(im)
    total_w = sum(p.width for p in panes) + gutter_px * (len(panes) - 1)
    out = np.empty((height, total_w, 3), dtype=np.uint8)
    out[:, :] = np.asarray(GUTTER_COLOR, dtype=np.uint8)
    x = 0
    for p in panes:
        out[:, x:x + p.width] = p.data
        x += p.width + gutter_px
    return ImageBuffer(out)


@dataclass(frozen=True)
class FrameBands:
    uv: BandImage | None = None
    ir: BandImage | None = None


def process_frame(
    img: ImageBuffer,
    profile: DeficiencyProfile | None = None,
    recipe: CorrectionRecipe | None = None,
    layout: str = "single",
    t_ms: float = 0.0,
    bands: FrameBands | None = None,
    augment_cfg: AugmentConfig | None = None,
    gutter_px: int = DEFAULT_GUTTER_PX,
) -> ImageBuffer:
    """One frame through the full pipeline; fully deterministic."""
    layout = parse_layout(layout)

    work = img
    if bands is not None and (bands.uv is not None or bands.ir is not None):
        cfg = augment_cfg or AugmentConfig()
        cfg = AugmentConfig(
            uv_enabled=bands.uv is not None,
            ir_enabled=bands.ir is not None,
            mix=cfg.mix,
            uv_display_color=cfg.uv_display_color,
            ir_display_color=cfg.ir_display_color,
        )
        if bands.uv is not None:
            work = fuse_band(work, bands.uv, cfg)
        if bands.ir is not None:
            work = fuse_band(work, bands.ir, cfg)

    has_recipe = recipe is not None and len(recipe) > 0
    simulated = simulate_image(work, profile) if profile is not None else work
    corrected = apply_recipe(work, recipe, profile, t_ms) if has_recipe else work

    if has_recipe:
        processed = corrected
    elif profile is not None:
        processed = simulated
    else:
        processed = work

    if layout == "single":
        return processed.copy() if processed is img else processed
    if layout == "side_by_side":
        return compose([img, processed], gutter_px=gutter_px)
    return compose([img, simulated, corrected], gutter_px=gutter_px)
