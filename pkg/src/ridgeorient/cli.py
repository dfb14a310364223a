"""ridgeorient command line: estimate, render, simulate, compare, gen-offsets."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import synth
from .fieldio import read_field, write_field
from .geometry import build_direction_set, format_offsets, generate_offset_rom
from .gradient import AngleField, block_differences, error_metric, gradient_orientation
from .image import Image, PGMError, read_pgm
from .orientation import OrientationParams, estimate_orientation_field
from .pipeline import TABLE_CONFIGS, PipelineConfig, run_pipeline, total_delay
from .render import dump_ppm, render_raster, render_svg

EXIT_OK, EXIT_USAGE, EXIT_INTERNAL = 0, 2, 3


class InputError(Exception):
    pass


def _even(name: str, minimum: int = 2):
    def parse(text: str) -> int:
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer") from None
        if v % 2:
            raise argparse.ArgumentTypeError(f"{name} must be even")
        if v < minimum:
            raise argparse.ArgumentTypeError(f"{name} must be >= {minimum}")
        return v

    return parse


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _add_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--N", type=_even("N"), default=16, metavar="COUNT", help="number of quantized directions")
    p.add_argument("--n", type=_even("n"), default=8, metavar="PIXELS", help="pixels sampled per direction")
    p.add_argument("--block-size", type=_positive, default=16)


def _add_input(p: argparse.ArgumentParser, required: bool = False) -> None:
    p.add_argument("image", nargs=None if required else "?", help="input PGM (P2 or P5)")
    g = p.add_argument_group("synthetic input (used when no image is given)")
    g.add_argument("--synth", choices=sorted(synth.PATTERNS), help="generate a test pattern")
    g.add_argument("--angle", type=float, default=0.0, help="ridge angle in degrees")
    g.add_argument("--period", type=float, default=8.0, help="pattern period in pixels")
    g.add_argument("--size", type=_positive, default=256, help="synthetic image side (H = L)")
    g.add_argument("--seed", type=int, default=0)


def _load_input(args) -> Image:
    if args.image is not None:
        try:
            return read_pgm(args.image)
        except OSError as e:
            raise InputError(f"cannot open {args.image}: {e.strerror or e}") from None
        except PGMError as e:
            raise InputError(f"{args.image}: {e}") from None
    if args.synth is None:
        raise InputError("no input: give an image path or --synth")
    size = args.size
    if args.synth == "stripe":
        return synth.stripes(size, size, int(args.period), args.angle)
    if args.synth == "sinusoid":
        return synth.sinusoid(size, size, args.period, args.angle)
    if args.synth == "noise":
        return synth.noise(size, size, args.seed)
    return synth.uniform(size, size)


def _params(args) -> OrientationParams:
    return OrientationParams(args.N, args.n, args.block_size)


def _estimate(img: Image, params: OrientationParams):
    try:
        return estimate_orientation_field(img, params)
    except ValueError as e:
        raise InputError(str(e)) from None


def cmd_estimate(args) -> int:
    img = _load_input(args)
    field = _estimate(img, _params(args))
    paths = write_field(field, args.output)
    rows, cols = field.shape
    print(f"{rows}x{cols} blocks, {int(field.valid.sum())} valid; wrote " + " ".join(str(p) for p in paths))
    return EXIT_OK


def cmd_render(args) -> int:
    try:
        field = read_field(args.field)
    except OSError as e:
        raise InputError(f"cannot open {args.field}: {e.strerror or e}") from None
    except ValueError as e:
        raise InputError(f"{args.field}: {e}") from None
    img = _load_input(args) if (args.image or args.synth) else None
    for out in args.output:
        out = Path(out)
        try:
            if out.suffix.lower() == ".svg":
                out.write_text(render_svg(field, img))
            elif out.suffix.lower() == ".ppm":
                if img is None:
                    raise InputError("a raster overlay needs the source image")
                out.write_bytes(dump_ppm(render_raster(field, img)))
            else:
                raise InputError(f"unknown overlay format {out.suffix!r} (use .svg or .ppm)")
        except ValueError as e:
            raise InputError(str(e)) from None
        print(f"wrote {out}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    img = _load_input(args)
    params = _params(args)
    H, L = img.shape
    fetches = params.N * params.n
    for row, cfg in enumerate(TABLE_CONFIGS, 1):
        print(f"config {row}: {cfg.label}: {total_delay(cfg, H, L, fetches)} CLK1 ticks")
    cfg = PipelineConfig(args.rams, args.registers)
    direct = _estimate(img, params)
    result = run_pipeline(img, cfg, params)
    print(
        f"simulated ({cfg.label}): {result.ticks} CLK1 ticks incl. "
        f"{result.fill_drain_ticks} fill/drain, {result.block_outputs} block outputs"
    )
    if args.reservation:
        Path(args.reservation).write_text(result.reservation.to_csv())
    if args.output:
        write_field(result.field, args.output)
    if result.field != direct:
        print("error: pipeline output differs from the direct estimator", file=sys.stderr)
        return EXIT_INTERNAL
    print("pipeline output matches the direct estimator")
    return EXIT_OK


def cmd_compare(args) -> int:
    img = _load_input(args)
    params = _params(args)
    P = AngleField.from_blocks(_estimate(img, params))
    G = gradient_orientation(img, params.block_size)
    report = error_metric(G, P)
    print(report.summary())
    if args.csv:
        diff = block_differences(G, P)
        lines = ["row,col,g_deg,p_deg,diff_deg"]
        for r in range(diff.shape[0]):
            for c in range(diff.shape[1]):
                if np.isnan(diff[r, c]):
                    continue
                lines.append(f"{r},{c},{G.angles[r, c]:.4f},{P.angles[r, c]:.4f},{diff[r, c]:.4f}")
        Path(args.csv).write_text("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_gen_offsets(args) -> int:
    rom = generate_offset_rom(build_direction_set(args.N), args.n)
    sys.stdout.write(format_offsets(rom))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ridgeorient", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="block orientation field of an image")
    _add_input(p)
    _add_params(p)
    p.add_argument("-o", "--output", default=".", help="output directory for field files")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("render", help="overlay a field on its image")
    p.add_argument("field", help="field.txt or the directory holding it")
    _add_input(p)
    p.add_argument("-o", "--output", action="append", required=True, help="overlay path (.svg or .ppm), repeatable")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("simulate", help="pipeline cycle model and self-check")
    _add_input(p)
    _add_params(p)
    p.add_argument("--rams", type=int, choices=(1, 8), default=1, help="replicated image memories")
    p.add_argument("--registers", action="store_true", help="registers between stage0 and stage1")
    p.add_argument("--reservation", help="write the reservation table CSV here")
    p.add_argument("-o", "--output", help="also write the pipeline's field files here")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="error against the gradient baseline")
    _add_input(p)
    _add_params(p)
    p.add_argument("--csv", help="per-block comparison CSV")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("gen-offsets", help="dump the neighbor offset ROM")
    _add_params(p)
    p.set_defaults(func=cmd_gen_offsets)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
