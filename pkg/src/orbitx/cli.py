"""``orbitx`` command line interface.

Exit codes: 0 success, 1 usage error, 2 data or format error, 3 verification
failure. Data goes to ``--out`` or stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
import warnings
from pathlib import Path

import numpy as np

from . import formats
from .algebra import AlgebraId, algebra_data
from .convolution import KERNEL_NAMES, Kernel, KernelError, builtin_kernel, convolve
from .grids import (
    enumerate_labels,
    enumerate_labels_even,
    enumerate_points,
    enumerate_points_even,
    epsilon,
    epsilon_even,
    h_dual,
    h_dual_even,
    label_coords,
    point_coords,
)
from .imaging import (
    PgmError,
    baseline_r2_filter,
    filter_image,
    load_image,
    make_hexagon_test_image,
    save_image,
)
from .transforms import DimensionError, DiscreteFunction, Spectrum, forward, inverse_grid

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_VERIFY = 0, 1, 2, 3

DATA_ERRORS = (
    formats.FormatError,
    PgmError,
    DimensionError,
    KernelError,
    FileNotFoundError,
    IsADirectoryError,
    PermissionError,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _algebra(value: str) -> AlgebraId:
    try:
        return AlgebraId.parse(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _positive(value: str) -> int:
    try:
        v = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {value!r}")
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _add_grid_flags(p, required: bool = True) -> None:
    p.add_argument("--algebra", type=_algebra, required=required, help="a2, c2 or g2")
    p.add_argument("--m", type=_positive, required=required, help="grid density M")
    p.add_argument("--kind", type=str.upper, choices=["C", "E"], default=None if not required else "C")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="orbitx", description="Weyl orbit transforms on A2, C2, G2 grids")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("grid-info", help="list grid points (or labels) as CSV")
    _add_grid_flags(p)
    p.add_argument("--labels", action="store_true", help="list Lambda_M instead of F_M")
    p.add_argument("--out")
    p.add_argument("--plot", help="also render the point grid to this image file")

    for name, hlp in (("transform", "forward orbit transform"), ("inv-transform", "inverse orbit transform")):
        p = sub.add_parser(name, help=hlp)
        _add_grid_flags(p, required=False)
        p.add_argument("--in", dest="inp", required=True)
        p.add_argument("--out")
        p.add_argument("--format", choices=["csv", "json"], default="csv")

    p = sub.add_parser("convolve", help="orbit convolution of a grid function with a kernel")
    _add_grid_flags(p, required=False)
    p.add_argument("--in", dest="inp", required=True)
    k = p.add_mutually_exclusive_group(required=True)
    k.add_argument("--kernel", choices=KERNEL_NAMES)
    k.add_argument("--kernel-file")
    p.add_argument("--method", choices=["spectral", "spatial"], default="spectral")
    p.add_argument("--out")
    p.add_argument("--format", choices=["csv", "json"], default="csv")

    p = sub.add_parser("verify", help="check orthogonality, round trip, Parseval and convolution theorems")
    _add_grid_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--plot", help="render the Gram matrix to this image file")

    p = sub.add_parser("filter-image", help="filter a PGM image with an orbit (or R^2) kernel")
    p.add_argument("--algebra", type=_algebra, default=AlgebraId.C2)
    p.add_argument("--m", type=_positive, default=None, help="grid density (default: image width)")
    p.add_argument("--kernel", choices=KERNEL_NAMES, required=True)
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=["pgm"], default="pgm")
    p.add_argument("--method", choices=["barycentric", "orbit"], default="barycentric")
    p.add_argument("--baseline", action="store_true", help="use the 3x3 R^2 convolution instead")

    p = sub.add_parser("demo", help="hexagon image filtered with all kernels, R^2 vs orbit")
    p.add_argument("--out-dir", default="demo_out")
    p.add_argument("--size", type=_positive, default=64)
    p.add_argument("--algebra", type=_algebra, default=AlgebraId.A2)
    p.add_argument("--m", type=_positive, default=None)
    p.add_argument("--no-figure", action="store_true")
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _check_header(obj, args) -> None:
    if args.algebra is not None and obj.algebra != args.algebra:
        raise formats.FormatError(f"file is for {obj.algebra.value}, --algebra says {args.algebra.value}")
    if args.m is not None and obj.M != args.m:
        raise formats.FormatError(f"file has M={obj.M}, --m says {args.m}")
    if args.kind is not None and obj.kind != args.kind:
        raise formats.FormatError(f"file has kind {obj.kind}, --kind says {args.kind}")


def cmd_grid_info(args) -> int:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    even = args.kind == "E"
    a, M = args.algebra, args.m
    if args.labels:
        w.writerow(["algebra", "M", "t0", "t1", "t2", *(["sector"] if even else []), "h", "lambda1", "lambda2"])
        items = enumerate_labels_even(a, M) if even else enumerate_labels(a, M)
        for l in items:
            base = l.base if even else l
            weight = h_dual_even(l) if even else h_dual(l)
            lam = label_coords(l)
            w.writerow([a.value, M, *base.t, *([l.sector] if even else []), weight, *lam])
    else:
        w.writerow(["algebra", "M", "s0", "s1", "s2", *(["sector"] if even else []), "epsilon", "x1", "x2"])
        items = enumerate_points_even(a, M) if even else enumerate_points(a, M)
        for p in items:
            base = p.base if even else p
            weight = epsilon_even(p) if even else epsilon(p)
            x = point_coords(p)
            w.writerow([a.value, M, *base.s, *([p.sector] if even else []), weight, *(str(v) for v in x)])
    _emit(buf.getvalue(), args.out)
    if args.plot:
        from .plotting import plot_grid

        plot_grid(a, M, args.plot)
    return EXIT_OK


def cmd_transform(args) -> int:
    f = formats.read(args.inp)
    if not isinstance(f, DiscreteFunction):
        raise formats.FormatError("transform expects a grid function file")
    _check_header(f, args)
    _emit(formats.dumps(forward(f), args.format), args.out)
    return EXIT_OK


def cmd_inv_transform(args) -> int:
    s = formats.read(args.inp)
    if not isinstance(s, Spectrum):
        raise formats.FormatError("inv-transform expects a spectrum file")
    _check_header(s, args)
    _emit(formats.dumps(inverse_grid(s), args.format), args.out)
    return EXIT_OK


def cmd_convolve(args) -> int:
    f = formats.read(args.inp)
    if not isinstance(f, DiscreteFunction):
        raise formats.FormatError("convolve expects a grid function file")
    _check_header(f, args)
    if args.kernel_file:
        g = formats.read(args.kernel_file)
        g = g.function if isinstance(g, Kernel) else g
        if not isinstance(g, DiscreteFunction):
            raise formats.FormatError("kernel file must hold a kernel or grid function")
    else:
        g = builtin_kernel(args.kernel, f.algebra, f.M, f.kind).function
    _emit(formats.dumps(convolve(f, g, args.method), args.format), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_checks

    checks = run_checks(args.algebra, args.m, args.kind, seed=args.seed)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["algebra", "M", "kind", "check", "value", "tolerance", "status"])
    for c in checks:
        w.writerow([args.algebra.value, args.m, args.kind, c.name, f"{c.value:.3e}", f"{c.tolerance:.0e}",
                    "pass" if c.passed else "FAIL"])
    _emit(buf.getvalue(), args.out)
    if args.plot:
        from .plotting import plot_gram

        plot_gram(args.algebra, args.m, args.kind, args.plot)
    failed = [c.name for c in checks if not c.passed]
    if failed:
        print(f"verification failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_filter_image(args) -> int:
    img = load_image(args.inp)
    if args.baseline:
        out = baseline_r2_filter(img, args.kernel)
    else:
        if img.width != img.height:
            raise formats.FormatError(f"orbit filtering needs a square image, got {img.width}x{img.height}")
        out = filter_image(img, args.kernel, args.algebra, args.m, method=args.method)
    save_image(out, args.out)
    return EXIT_OK


def run_demo(out_dir, size: int = 64, algebra=AlgebraId.A2, M: int | None = None, figure: bool = True) -> dict:
    """Write the hexagon image and its six filtered versions; return their paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    img = make_hexagon_test_image(size)
    data = algebra_data(algebra)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        orbit_mean = filter_image(img, "mean", data.id, M)
        results = {
            "hexagon": img,
            "r2_mean": baseline_r2_filter(img, "mean"),
            "orbit_mean": orbit_mean,
        }
        # sharpening is applied to the blurred image
        results["r2_sharpen"] = baseline_r2_filter(results["r2_mean"], "sharpen")
        results["orbit_sharpen"] = filter_image(orbit_mean, "sharpen", data.id, M)
        results["r2_edge"] = baseline_r2_filter(img, "edge")
        results["orbit_edge"] = filter_image(img, "edge", data.id, M)
    paths = {}
    rows = [["image", "mean", "std", "min", "max"]]
    for name, im in results.items():
        path = out_dir / f"{name}.pgm"
        save_image(im, path)
        paths[name] = path
        px = np.floor(np.clip(im.pixels, 0, 1) * 255 + 0.5) / 255
        rows.append([name, f"{px.mean():.6f}", f"{px.std():.6f}", f"{px.min():.6f}", f"{px.max():.6f}"])
    summary = out_dir / "demo_summary.csv"
    with summary.open("w", newline="") as fh:
        csv.writer(fh, lineterminator="\n").writerows(rows)
    paths["summary"] = summary
    if figure:
        from .plotting import plot_demo

        panels = {
            "blur": (results["r2_mean"], results["orbit_mean"]),
            "sharpen(blur)": (results["r2_sharpen"], results["orbit_sharpen"]),
            "edge": (results["r2_edge"], results["orbit_edge"]),
        }
        fig_path = out_dir / "demo.png"
        plot_demo(img, panels, fig_path)
        paths["figure"] = fig_path
    return paths


def cmd_demo(args) -> int:
    paths = run_demo(args.out_dir, args.size, args.algebra, args.m, figure=not args.no_figure)
    for p in paths.values():
        print(p, file=sys.stderr)
    return EXIT_OK


COMMANDS = {
    "grid-info": cmd_grid_info,
    "transform": cmd_transform,
    "inv-transform": cmd_inv_transform,
    "convolve": cmd_convolve,
    "verify": cmd_verify,
    "filter-image": cmd_filter_image,
    "demo": cmd_demo,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"orbitx: error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except DATA_ERRORS as exc:
        print(f"orbitx: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"orbitx: {exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
