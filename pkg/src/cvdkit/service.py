"""Stateless frame-processing HTTP service.

One POST /process call processes one frame; the handler is a pure function
of the request body (blink phase comes from the client-supplied t_ms), so
identical requests produce byte-identical responses. Images travel as
base64-encoded PNG in a JSON envelope.
"""

from __future__ import annotations

import base64
import binascii
import time

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import __version__
from .augment import (IR_DISPLAY_COLOR, UV_DISPLAY_COLOR, AugmentConfig, BandImage)
from .correct import OPERATOR_DEFAULTS, _PROFILE_REQUIRED
from .errors import ValidationError
from .image import decode_png_bytes, decode_png_gray_bytes, encode_png_bytes
from .pipeline import DEFAULT_GUTTER_PX, LAYOUTS, FrameBands, parse_recipe, process_frame
from .simulate import Deficiency, DeficiencyProfile
from .spectral import ConeClass


class ProcessRequest(BaseModel):
    image: str
    profile: dict | None = None
    recipe: list = Field(default_factory=list)
    layout: str = "single"
    t_ms: float = 0.0
    bands: dict | None = None
    augment: dict | None = None
    gutter_px: int = DEFAULT_GUTTER_PX


def _b64_image(data: str, field: str) -> bytes:
    try:
        return base64.b64decode(data, validate=True)
    except (binascii.Error, ValueError) as exc:
        raise ValidationError("bad_image", f"{field} is not valid base64: {exc}", field=field) from exc


def _parse_profile(obj: dict | None) -> DeficiencyProfile | None:
    if obj is None:
        return None
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValidationError("bad_kind", "profile must be an object with a 'kind'", field="profile")
    severity = obj.get("severity")
    return DeficiencyProfile.parse(obj["kind"], None if severity is None else float(severity))


def _parse_bands(obj: dict | None) -> FrameBands:
    if obj is None:
        return FrameBands()
    if not isinstance(obj, dict):
        raise ValidationError("bad_band", "bands must be an object with 'uv' and/or 'ir'", field="bands")
    out = {}
    for name, cone in (("uv", ConeClass.UV), ("ir", ConeClass.IR)):
        raw = obj.get(name)
        if raw is None:
            out[name] = None
            continue
        gray = decode_png_gray_bytes(_b64_image(raw, f"bands.{name}"))
        out[name] = BandImage(cone, gray)
    return FrameBands(uv=out["uv"], ir=out["ir"])


def _parse_augment(obj: dict | None) -> AugmentConfig | None:
    if obj is None:
        return None
    if not isinstance(obj, dict):
        raise ValidationError("bad_augment", "augment must be an object", field="augment")
    def color_of(key, default):
        value = obj.get(key)
        if value is None:
            return default
        try:
            r, g, b = (int(v) for v in value)
        except (TypeError, ValueError):
            raise ValidationError("bad_color", f"{key} must be an [r, g, b] triple", field=key) from None
        return (r, g, b)
    return AugmentConfig(
        mix=float(obj.get("mix", 0.5)),
        uv_display_color=color_of("uv_color", UV_DISPLAY_COLOR),
        ir_display_color=color_of("ir_color", IR_DISPLAY_COLOR),
    )


def capabilities_document() -> dict:
    operators = {}
    for name, defaults in OPERATOR_DEFAULTS.items():
        operators[name] = {
            "params": defaults,
            "profile_required": name in _PROFILE_REQUIRED,
        }
    return {
        "version": __version__,
        "deficiency_kinds": [d.value for d in Deficiency],
        "anomalous_kinds": ["protanomaly", "deuteranomaly", "tritanomaly"],
        "operators": operators,
        "layouts": list(LAYOUTS),
        "augment": {
            "bands": ["uv", "ir"],
            "mix": 0.5,
            "uv_color": list(UV_DISPLAY_COLOR),
            "ir_color": list(IR_DISPLAY_COLOR),
        },
        "defaults": {"layout": "single", "gutter_px": DEFAULT_GUTTER_PX},
    }


def create_app() -> FastAPI:
    app = FastAPI(title="cvdkit service", version=__version__)
    # local assistive tool; the browser viewer is served from a separate origin
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])

    @app.exception_handler(ValidationError)
    async def _validation_handler(request: Request, exc: ValidationError):
        return JSONResponse(status_code=400, content=exc.as_dict())

    @app.exception_handler(Exception)
    async def _internal_handler(request: Request, exc: Exception):
        return JSONResponse(status_code=500, content={
            "code": "internal", "message": f"{type(exc).__name__}: {exc}", "field": None,
        })

    @app.get("/health")
    async def health():
        return {"status": "ok", "version": __version__}

    @app.get("/capabilities")
    async def capabilities():
        return capabilities_document()

    @app.post("/process")
    async def process(req: ProcessRequest):
        t0 = time.perf_counter()
        img = decode_png_bytes(_b64_image(req.image, "image"))
        profile = _parse_profile(req.profile)
        recipe = parse_recipe(req.recipe)
        bands = _parse_bands(req.bands)
        augment_cfg = _parse_augment(req.augment)
        out = process_frame(
            img,
            profile=profile,
            recipe=recipe,
            layout=req.layout,
            t_ms=req.t_ms,
            bands=bands,
            augment_cfg=augment_cfg,
            gutter_px=req.gutter_px,
        )
        png = encode_png_bytes(out)
        elapsed_ms = (time.perf_counter() - t0) * 1000.0
        applied = {
            "profile": None if profile is None else {"kind": profile.kind.value,
                                                     "severity": profile.severity},
            "recipe": [{"op": s.op, "params": {**OPERATOR_DEFAULTS[s.op], **s.params}}
                       for s in recipe.steps],
            "layout": req.layout,
            "t_ms": req.t_ms,
            "gutter_px": req.gutter_px,
            "bands": {"uv": bands.uv is not None, "ir": bands.ir is not None},
        }
        return {
            "image": base64.b64encode(png).decode("ascii"),
            "timing_ms": elapsed_ms,
            "applied": applied,
        }

    return app
