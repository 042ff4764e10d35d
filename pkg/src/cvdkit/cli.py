"""Command-line front end.

Exit codes: 0 success, 1 usage, 2 I/O, 3 validation, 4 internal. An optional
config file (JSON or key=value lines) supplies defaults for kind, severity,
layout and gutter; explicit flags always win.
"""

from __future__ import annotations

import argparse
import json
import sys

from PIL import UnidentifiedImageError

from . import __version__
from .augment import AugmentConfig, BandImage
from .bench import BENCH_OPERATORS, bench
from .correct import CorrectionRecipe, RecipeStep
from .errors import ValidationError
from .image import ImageBuffer, read_png, read_png_gray, write_png, write_png_gray
from .pipeline import (DEFAULT_GUTTER_PX, FrameBands, compose, parse_recipe_json,
                       process_frame)
from .plates import PRESET_PALETTES, PlateSpec, generate_plate, legibility
from .simulate import DeficiencyProfile
from .spectral import ConeClass, RainbowSpec, render_rainbow

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_VALIDATION = 3
EXIT_INTERNAL = 4


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors by default; 2 is the I/O class here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _parse_color(text: str, name: str) -> tuple:
    try:
        parts = [int(v) for v in str(text).split(",")]
        r, g, b = parts
    except ValueError:
        raise ValidationError("bad_color", f"{name} must be R,G,B", field=name) from None
    if not all(0 <= v <= 255 for v in (r, g, b)):
        raise ValidationError("bad_color", f"{name} channels must be in [0, 255]", field=name)
    return (r, g, b)


def _parse_size(text: str) -> tuple[int, int]:
    try:
        w, h = text.lower().split("x")
        return int(w), int(h)
    except ValueError:
        raise ValidationError("bad_size", "size must look like 1920x1080", field="size") from None


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError("bad_config", f"config is not valid JSON: {exc}") from exc
        if not isinstance(obj, dict):
            raise ValidationError("bad_config", "config JSON must be an object")
        return obj
    out = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValidationError("bad_config", f"config line {line!r} is not key=value")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def _merged(args, config: dict, key: str, fallback):
    value = getattr(args, key, None)
    if value is not None:
        return value
    if key in config:
        return config[key]
    return fallback


def _profile_from(args, config) -> DeficiencyProfile | None:
    kind = _merged(args, config, "kind", None)
    if kind is None:
        return None
    severity = _merged(args, config, "severity", None)
    return DeficiencyProfile.parse(kind, None if severity is None else float(severity))


def _recipe_from(args) -> CorrectionRecipe | None:
    recipe = None
    if getattr(args, "recipe", None):
        with open(args.recipe, "r", encoding="utf-8") as fh:
            recipe = parse_recipe_json(fh.read())
    ops = getattr(args, "op", None)
    if ops:
        steps = tuple(recipe.steps) if recipe else ()
        recipe = CorrectionRecipe(steps + tuple(RecipeStep(op) for op in ops))
    return recipe


def _cmd_rainbow(args, config) -> int:
    spec = RainbowSpec(width=args.width, height=args.height,
                       lambda_min_nm=args.lambda_min, lambda_max_nm=args.lambda_max)
    write_png(render_rainbow(spec), args.output)
    return EXIT_OK


def _cmd_process(args, config) -> int:
    img = read_png(args.input)
    profile = _profile_from(args, config)
    recipe = _recipe_from(args)
    layout = str(_merged(args, config, "layout", "single"))
    gutter = int(_merged(args, config, "gutter", DEFAULT_GUTTER_PX))
    out = process_frame(img, profile=profile, recipe=recipe, layout=layout,
                        t_ms=args.t_ms, gutter_px=gutter)
    write_png(out, args.output)
    return EXIT_OK


def _cmd_plate(args, config) -> int:
    if args.preset not in PRESET_PALETTES:
        raise ValidationError("bad_preset",
                              f"unknown preset {args.preset!r}; expected one of {', '.join(PRESET_PALETTES)}",
                              field="preset")
    fig, gnd = PRESET_PALETTES[args.preset]
    spec = PlateSpec(digit=args.digit, seed=args.seed, size_px=args.size,
                     figure_palette=fig, ground_palette=gnd)
    plate = generate_plate(spec)
    if args.output:
        write_png(plate.image, args.output)
    if args.mask_out:
        write_png_gray(plate.figure_mask.bits.astype("uint8") * 255, args.mask_out)
    if args.score:
        scored = read_png(args.score)
        report = legibility(plate, lambda _img: scored)
        subject = args.score
    else:
        report = legibility(plate, lambda img: img)
        subject = "plate"
    if args.json:
        print(json.dumps({"subject": subject, **report.as_dict()}))
    else:
        print(f"{subject}: score={report.score:.2f} dE verdict={report.verdict}")
    return EXIT_OK


def _cmd_augment(args, config) -> int:
    img = read_png(args.input)
    uv = BandImage(ConeClass.UV, read_png_gray(args.uv)) if args.uv else None
    ir = BandImage(ConeClass.IR, read_png_gray(args.ir)) if args.ir else None
    if uv is None and ir is None:
        raise ValidationError("bad_band", "augment needs --uv and/or --ir", field="band")
    cfg = AugmentConfig(
        uv_enabled=uv is not None,
        ir_enabled=ir is not None,
        mix=args.mix,
        uv_display_color=_parse_color(args.uv_color, "uv_color"),
        ir_display_color=_parse_color(args.ir_color, "ir_color"),
    )
    out = process_frame(img, layout=args.layout or "single",
                        bands=FrameBands(uv=uv, ir=ir), augment_cfg=cfg,
                        gutter_px=int(_merged(args, config, "gutter", DEFAULT_GUTTER_PX)))
    write_png(out, args.output)
    return EXIT_OK


def _cmd_compose(args, config) -> int:
    images = [read_png(p) for p in args.inputs]
    out = compose(images, gutter_px=args.gutter)
    write_png(out, args.output)
    return EXIT_OK


def _cmd_bench(args, config) -> int:
    width, height = _parse_size(args.size)
    for op in args.op:
        report = bench(op, width, height, args.iterations)
        print(f"{report.operator}: {report.ms_per_frame:.3f} ms/frame "
              f"({report.megapixels_per_s:.2f} MP/s) over {report.iterations} runs")
        print(report.machine_line())
    return EXIT_OK


def _cmd_serve(args, config) -> int:
    import uvicorn

    from .service import create_app
    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cvdkit", description="Color vision deficiency simulation and correction toolkit")
    parser.add_argument("--version", action="version", version=f"cvdkit {__version__}")
    parser.add_argument("--config", help="optional config file (JSON or key=value) with flag defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rainbow", help="render the visible spectrum, red at the left")
    p.add_argument("--width", type=int, default=750)
    p.add_argument("--height", type=int, default=100)
    p.add_argument("--lambda-min", type=float, default=380.0)
    p.add_argument("--lambda-max", type=float, default=750.0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_rainbow)

    for name, help_text in (("simulate", "render an image as seen under a deficiency"),
                            ("correct", "apply correction operators to an image")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("-i", "--input", required=True)
        p.add_argument("-o", "--output", required=True)
        p.add_argument("--kind", help="deficiency kind (e.g. protanopia)")
        p.add_argument("--severity", type=float)
        p.add_argument("--layout", help="single, side_by_side or triptych")
        p.add_argument("--recipe", help="JSON recipe file")
        p.add_argument("--op", action="append", help="append an operator with default params (repeatable)")
        p.add_argument("--t-ms", type=float, default=0.0, dest="t_ms")
        p.add_argument("--gutter", type=int)
        p.set_defaults(func=_cmd_process)

    p = sub.add_parser("plate", help="generate a pseudoisochromatic plate and report legibility")
    p.add_argument("--digit", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--size", type=int, default=480)
    p.add_argument("--preset", default="protan")
    p.add_argument("-o", "--output", help="write the plate PNG here")
    p.add_argument("--mask-out", help="write the figure mask PNG here")
    p.add_argument("--score", help="score this image against the plate masks instead of the plate itself")
    p.add_argument("--json", action="store_true", help="emit the report as JSON")
    p.set_defaults(func=_cmd_plate)

    p = sub.add_parser("augment", help="fuse UV/IR band images into a visible image")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--uv", help="UV band PNG (grayscale)")
    p.add_argument("--ir", help="IR band PNG (grayscale)")
    p.add_argument("--mix", type=float, default=0.5)
    p.add_argument("--uv-color", default="130,0,255")
    p.add_argument("--ir-color", default="255,40,40")
    p.add_argument("--layout", help="single, side_by_side or triptych")
    p.set_defaults(func=_cmd_augment)

    p = sub.add_parser("compose", help="concatenate images side by side")
    p.add_argument("-i", "--inputs", nargs="+", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--gutter", type=int, default=DEFAULT_GUTTER_PX)
    p.set_defaults(func=_cmd_compose)

    p = sub.add_parser("bench", help="benchmark operators on a synthetic image")
    p.add_argument("--op", action="append", required=True,
                   help=f"operator to time (repeatable); one of: {', '.join(BENCH_OPERATORS)}")
    p.add_argument("--size", default="1920x1080")
    p.add_argument("--iterations", type=int, default=30)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("serve", help="run the processing service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = _load_config(args.config)
        return args.func(args, config)
    except ValidationError as exc:
        print(f"cvdkit: error [{exc.code}]: {exc.message}", file=sys.stderr)
        return EXIT_VALIDATION
    except (OSError, UnidentifiedImageError) as exc:
        print(f"cvdkit: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except Exception as exc:  # noqa: BLE001 - one-line diagnostic, distinct exit code
        print(f"cvdkit: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
