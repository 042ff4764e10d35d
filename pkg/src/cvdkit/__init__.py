"""cvdkit: color vision deficiency simulation and correction toolkit."""

__version__ = "0.1.0"

from .augment import AugmentConfig, BandImage, fuse_band, fuse_pentachromatic
from .color import (HsvTriple, LabTriple, LinearRgb, LmsTriple, PixelSrgb, delta_e,
                    hsv_to_rgb, lms_to_rgb, rgb_to_hsv, rgb_to_lab, rgb_to_lms,
                    srgb_decode, srgb_encode)
from .correct import (BlinkState, CorrectionRecipe, RecipeStep, apply_recipe,
                      blink_overlay, confusion_mask, desaturate_helper,
                      edge_enhance_confusable, luminance_equalize, passive_filter,
                      red_channel_grayscale)
from .errors import RecipeStepError, ValidationError
from .image import ImageBuffer, RegionMask, read_png, write_png
from .pipeline import FrameBands, compose, process_frame
from .plates import (LegibilityReport, Plate, PlateSpec, generate_plate, legibility,
                     protan_plate_spec)
from .simulate import (Deficiency, DeficiencyProfile, confusion_distance,
                       confusion_field, simulate_image, simulate_pixel)
from .spectral import (ConeClass, RainbowSpec, SpectralResponse, cone_response,
                       render_rainbow, wavelength_to_rgb)

__all__ = [
    "AugmentConfig", "BandImage", "BlinkState", "ConeClass", "CorrectionRecipe",
    "Deficiency", "DeficiencyProfile", "FrameBands", "HsvTriple", "ImageBuffer",
    "LabTriple", "LegibilityReport", "LinearRgb", "LmsTriple", "PixelSrgb", "Plate",
    "PlateSpec", "RainbowSpec", "RecipeStep", "RecipeStepError", "RegionMask",
    "SpectralResponse", "ValidationError", "apply_recipe", "blink_overlay", "compose",
    "cone_response", "confusion_distance", "confusion_field", "confusion_mask",
    "delta_e", "desaturate_helper", "edge_enhance_confusable", "fuse_band",
    "fuse_pentachromatic", "generate_plate", "hsv_to_rgb", "legibility",
    "lms_to_rgb", "luminance_equalize", "passive_filter", "process_frame",
    "protan_plate_spec", "read_png", "red_channel_grayscale", "render_rainbow",
    "rgb_to_hsv", "rgb_to_lab", "rgb_to_lms", "simulate_image", "simulate_pixel",
    "srgb_decode", "srgb_encode", "wavelength_to_rgb", "write_png",
]
