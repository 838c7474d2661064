"""Command-line entry point: ``dsvis <command> ...`` (or ``python -m dsvis``).

Exit status is 0 on success, 1 on usage errors and 2 on data errors.
"""
from __future__ import annotations

import argparse
import csv
import logging
import sys
from fractions import Fraction
from pathlib import Path

from .algorithms import ALGORITHMS, DownsampleSpec, downsample, materialize, parse_algorithm
from .data import TemplateSpec, generate_noise, read_records, save_series, write_records
from .errors import DsvisError
from .experiments import (
    Skip,
    detect_elbow,
    max_abs_offset,
    parse_grid,
    predict_elbow,
    repr_sweep,
    stability_setup,
    stability_sweep,
)
from .raster import RenderConfig, render
from .report import summarize, write_report
from .stability import OFFSET_SUITE, UPDATE_KINDS, update_suite

log = logging.getLogger("dsvis")

EXIT_USAGE = 1
EXIT_DATA = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# --------------------------------------------------------------------------- argument types


def _line_width(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v >= 1:
        raise argparse.ArgumentTypeError(f"line width must be >= 1, got {text}")
    return v


def _line_widths(text: str) -> list[float]:
    return [_line_width(t) for t in text.split(",") if t.strip()]


def _canvas(text: str) -> tuple[int, int]:
    try:
        w, h = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"canvas must look like 800x250, got {text!r}") from None
    if w < 1 or h < 1:
        raise argparse.ArgumentTypeError(f"canvas dimensions must be positive, got {text!r}")
    return w, h


def _grid(text: str) -> list[int]:
    try:
        values = parse_grid(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"n_out grid must be 'start:stop:step' or a comma list, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty n_out grid")
    return values


def _algorithms(text: str) -> list[str]:
    try:
        return [parse_algorithm(t.strip()) for t in text.split(",") if t.strip()]
    except DsvisError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _offsets(text: str) -> list[Fraction]:
    try:
        values = [Fraction(t.strip()) for t in text.split(",") if t.strip()]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"offsets must be ratios like 1/53, got {text!r}") from None
    if any(v <= 0 for v in values):
        raise argparse.ArgumentTypeError("offsets must be positive (each is applied in both directions)")
    return values


def _kinds(text: str) -> list[str]:
    kinds = [t.strip() for t in text.split(",") if t.strip()]
    bad = [k for k in kinds if k not in UPDATE_KINDS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown update kind(s) {bad}; choose from {', '.join(UPDATE_KINDS)}")
    return kinds


# --------------------------------------------------------------------------- commands


def _write_skips(skips: list[Skip], out: Path) -> None:
    path = out.with_name(out.stem + ".skipped.csv")
    if not skips:
        if path.exists():
            path.unlink()
        return
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("template", "algorithm", "n_out", "line_width", "offset", "kind", "reason"))
        for s in skips:
            lw = "" if s.line_width is None else f"{s.line_width:g}"
            w.writerow((s.template, s.algorithm, s.n_out, lw, s.offset, s.kind, s.reason))
    log.warning("%d infeasible cells skipped, see %s", len(skips), path)


def cmd_downsample(args) -> None:
    series = TemplateSpec.parse(args.input, args.seed).build()
    spec = DownsampleSpec(args.algo, args.n_out, args.binning)
    save_series(materialize(series, downsample(series, spec)), args.output)


def cmd_render(args) -> None:
    series = TemplateSpec.parse(args.input, args.seed).build()
    if args.algo:
        series = materialize(series, downsample(series, DownsampleSpec(args.algo, args.n_out, args.binning)))
    w, h = args.canvas
    render(series, RenderConfig(w, h, args.line_width, not args.no_antialias)).save_pgm(args.output)


def _templates(args, default: str) -> list[TemplateSpec]:
    return [TemplateSpec.parse(t, args.seed) for t in (args.template or [default])]


def cmd_eval_repr(args) -> None:
    templates = {t.name: t.build() for t in _templates(args, "noise-50k")}
    records, skips = repr_sweep(
        templates, args.algo, args.n_out, args.line_width, (not args.no_antialias,),
        args.canvas, args.kernel_size, args.binning, args.jobs,
    )
    write_records(records, args.out)
    _write_skips(skips, args.out)
    log.info("wrote %d records to %s", len(records), args.out)


def cmd_eval_stability(args) -> None:
    updates = update_suite(args.offsets, args.kinds)
    reach = max_abs_offset(updates)
    templates = {t.name: stability_setup(t, reach) for t in _templates(args, "noise-200k")}
    records, skips = stability_sweep(templates, args.algo, args.n_out, updates, args.binning, args.jobs)
    write_records(records, args.out)
    _write_skips(skips, args.out)
    log.info("wrote %d records to %s", len(records), args.out)


def cmd_report(args) -> None:
    records = read_records(args.records)
    text = summarize(records)
    if text:
        print(text)
    if args.out:
        for path in write_report(records, args.out):
            log.info("wrote %s", path)


def cmd_predict_elbow(args) -> None:
    width = args.canvas[0]
    curves = {}
    if args.records:
        for rec in read_records(args.records):
            if rec.metric == "pem20" and rec.kind == "" and rec.algorithm == args.algo:
                curves.setdefault(rec.line_width, []).append((rec.n_out, rec.value))
    for lw in args.line_width:
        predicted = predict_elbow(width, lw, args.algo)
        line = f"{args.algo} cw={width} lw={lw:g} predicted={predicted}"
        if lw in curves:
            pts = sorted(curves[lw])
            empirical = detect_elbow([n for n, _ in pts], [v for _, v in pts])
            line += f" empirical={empirical} rel_err={(empirical - predicted) / predicted:+.3f}"
        print(line)


def cmd_gen_noise(args) -> None:
    save_series(generate_noise(args.seed, args.size), args.output)


# --------------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dsvis", description="Time series downsampling and chart fidelity benchmarks.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, algo_list=False):
        p.add_argument("--seed", type=int, default=0, help="seed for noise templates (default 0)")
        p.add_argument("--binning", choices=("index", "x"), default="index")
        if algo_list:
            p.add_argument("--algo", type=_algorithms, default=list(ALGORITHMS),
                           help="comma-separated algorithms (default: all four)")
            p.add_argument("--n-out", type=_grid, default=list(range(200, 2001, 200)),
                           help="grid as start:stop:step or a comma list (default 200:2000:200)")
            p.add_argument("--template", action="append",
                           help="noise-50k, noise-200k, noise-1m, noise:N or PATH[@N]; repeatable")
            p.add_argument("--jobs", type=int, default=1, help="worker processes")
            p.add_argument("--out", type=Path, required=True, help="records CSV")

    p = sub.add_parser("downsample", help="downsample a series file")
    p.add_argument("input", help="series file (csv or .f64) or noise template")
    p.add_argument("output", help="output file (csv, or raw float64 for .f64/.raw/.bin)")
    p.add_argument("--algo", type=parse_algorithm, required=True)
    p.add_argument("--n-out", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_downsample)

    p = sub.add_parser("render", help="render a series as a PGM line chart")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--canvas", type=_canvas, default=(800, 250), help="WxH (default 800x250)")
    p.add_argument("--line-width", type=_line_width, default=2.0)
    p.add_argument("--no-antialias", action="store_true")
    p.add_argument("--algo", type=parse_algorithm, help="downsample before rendering")
    p.add_argument("--n-out", type=int, default=1000)
    common(p)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("eval-repr", help="representativeness sweep (mse, pem20, dssim)")
    common(p, algo_list=True)
    p.add_argument("--line-width", type=_line_widths, default=[2.0], help="comma list (default 2)")
    p.add_argument("--canvas", type=_canvas, default=(800, 250))
    p.add_argument("--no-antialias", action="store_true")
    p.add_argument("--kernel-size", type=int, default=7, help="OR-conv kernel, odd (default 7)")
    p.set_defaults(func=cmd_eval_repr)

    p = sub.add_parser("eval-stability", help="pan/zoom stability sweep (mae, maep)")
    common(p, algo_list=True)
    p.add_argument("--offsets", type=_offsets, default=list(OFFSET_SUITE),
                   help="comma-separated ratios (default 1/53,1/27,1/17,1/11,3/23,2/11)")
    p.add_argument("--kinds", type=_kinds, default=list(UPDATE_KINDS),
                   help="comma list of pan, zoom-in, zoom-out (default all)")
    p.set_defaults(func=cmd_eval_stability)

    p = sub.add_parser("report", help="summarize a records file")
    p.add_argument("records", type=Path)
    p.add_argument("--out", type=Path, help="directory for curve and quartile CSVs")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("predict-elbow", help="predicted pem20 elbow position")
    p.add_argument("--algo", type=parse_algorithm, default="lttb")
    p.add_argument("--canvas", type=_canvas, default=(800, 250))
    p.add_argument("--line-width", type=_line_widths, default=[1.0, 2.0, 3.0])
    p.add_argument("--records", type=Path, help="compare with the empirical elbow in this records file")
    p.set_defaults(func=cmd_predict_elbow)

    p = sub.add_parser("gen-noise", help="write a Gaussian noise template")
    p.add_argument("output")
    p.add_argument("--size", type=int, default=50_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gen_noise)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    if getattr(args, "kernel_size", 1) % 2 == 0 or getattr(args, "kernel_size", 1) < 1:
        parser.error("--kernel-size must be a positive odd integer")
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be >= 1")
    try:
        args.func(args)
    except (DsvisError, OSError) as exc:
        print(f"dsvis: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return 0


if __name__ == "__main__":
    sys.exit(main())
