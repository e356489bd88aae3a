"""Command-line front end.

Exit codes: 0 success, 1 usage/configuration/I-O error, 2 a check or
verdict failed.
"""

from __future__ import annotations

import argparse
import math
import re
import sys
from pathlib import Path

import numpy as np

from . import analysis, kernelfile
from .errors import KantorovichError
from .kernel_builder import build_matched_kernel
from .kernels import (
    absolute_moment,
    check_moment_condition,
    default_u_grid,
    fourier_moment_check,
)
from .operators import ShiftedGrid
from .signals import CATALOG, signal_from_name

EXIT_OK, EXIT_ERROR, EXIT_FAIL = 0, 1, 2


class ConfigError(Exception):
    pass


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _pair(text: str) -> tuple[float, float]:
    vals = _floats(text)
    if len(vals) != 2 or not vals[0] < vals[1]:
        raise argparse.ArgumentTypeError(f"expected LO,HI with LO < HI, got {text!r}")
    return vals[0], vals[1]


def _num(v: float) -> str:
    return f"{v:.17g}"


def _kernel(args, name_attr: str = "kernel"):
    path = getattr(args, "kernel_file", None)
    if path:
        if not Path(path).is_file():
            raise ConfigError(f"kernel file not found: {path}")
        return kernelfile.load(path)
    if getattr(args, "order", None) is not None and getattr(args, "shifts", None):
        return build_matched_kernel(args.order, args.shifts)
    name = getattr(args, name_attr, None)
    if not name:
        raise ConfigError("give a kernel name, a kernel file, or --order with --shifts")
    return kernelfile.kernel_from_name(name)


def _xs(args) -> np.ndarray:
    lo, hi = args.x_window
    if args.points < 1:
        raise ConfigError("--points must be positive")
    return analysis.x_grid(lo, hi, args.points)


def _ws(values) -> list[float]:
    if not values or any(not w > 0 for w in values):
        raise ConfigError("w list must be nonempty and positive")
    return sorted(values)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# kernel subcommands
# ---------------------------------------------------------------------------


def cmd_kernel_list(args) -> int:
    for name in kernelfile.BUILTIN_NAMES:
        k = kernelfile.kernel_from_name(name)
        print(f"{name:16s} {k.support}")
    print("(also bspline1..bspline12, jackson<k>[:<alpha>])")
    return EXIT_OK


def cmd_kernel_eval(args) -> int:
    kernel = _kernel(args, "name")
    for x in args.at:
        print(_num(kernel.evaluate(x)))
    return EXIT_OK


def cmd_kernel_certify(args) -> int:
    kernel = _kernel(args, "name")
    grid = default_u_grid(args.grid)
    ok, reports = check_moment_condition(kernel, args.r, grid, args.tol)
    print(f"kernel {kernel.name}  r={args.r}  grid={args.grid}  tol={args.tol:g}")
    for rep in reports:
        role = "must vanish" if rep.beta < args.r else "informational"
        dev = "divergent" if rep.divergent else f"{rep.max_abs_deviation:.3e}"
        print(f"  max |m_{rep.beta}| = {dev}  ({role})")
    try:
        fourier = "pass" if fourier_moment_check(kernel, args.r, args.k_range, args.fourier_tol) else "fail"
    except KantorovichError as exc:
        fourier = f"n/a ({exc})"
    print(f"  fourier check (K={args.k_range}, tol={args.fourier_tol:g}): {fourier}")
    try:
        print(f"  M_0 = {absolute_moment(kernel, 0.0):.12g}")
    except KantorovichError:
        pass
    print("certified" if ok else "NOT certified")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_kernel_build(args) -> int:
    kernel = build_matched_kernel(args.order, args.shifts)
    text = kernelfile.dumps(kernel)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        coeffs = ", ".join(_num(a) for a in kernel.coefficients)
        print(f"wrote {args.out}: coefficients [{coeffs}]")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# experiment subcommands
# ---------------------------------------------------------------------------


def cmd_rates(args) -> int:
    kernel = _kernel(args)
    signal = signal_from_name(args.signal)
    xs, ws = _xs(args), _ws(args.ws)
    ops = [op.strip() for op in args.op.split(",") if op.strip()]
    expected = args.expect_slope or []
    if expected and len(expected) != len(ops):
        raise ConfigError("--expect-slope needs one value per operator")
    grid = ShiftedGrid(args.delta)
    reports, passed = [], True
    for i, op in enumerate(ops):
        rep = analysis.rate_report(kernel, signal, op, ws, xs, grid=grid)
        reports.append(rep)
        line = f"{rep.kernel} {rep.signal} {rep.operator}: slope={rep.fitted_slope:.4f} residual={rep.fit_residual:.2e}"
        if expected:
            ok = math.isfinite(rep.fitted_slope) and abs(rep.fitted_slope - expected[i]) <= args.slope_tol
            passed &= ok
            line += f"  expected {expected[i]:g}±{args.slope_tol:g}: {'pass' if ok else 'FAIL'}"
        print(line, file=sys.stderr if not args.out else sys.stdout)
    _emit(analysis.rate_csv(reports), args.out)
    if args.svg:
        analysis.write_loglog_svg([(f"{r.operator}", r.ws, r.errors) for r in reports], args.svg)
    return EXIT_OK if passed else EXIT_FAIL


def cmd_saturate(args) -> int:
    kernel = _kernel(args)
    signal = signal_from_name(args.signal)
    rep = analysis.saturation_probe(kernel, signal, _ws(args.ws), _xs(args))
    stream = sys.stdout if args.out else sys.stderr
    for w, d in zip(rep.ws, rep.deviations):
        print(f"w={w:g}  d={d:.6e}", file=stream)
    print(f"verdict: {'pass' if rep.verdict else 'FAIL'}", file=stream)
    _emit(analysis.saturation_csv([rep]), args.out)
    if args.svg:
        analysis.write_loglog_svg([("d(w)", rep.ws, rep.deviations)], args.svg,
                                  ylabel="saturation deviation")
    return EXIT_OK if rep.verdict else EXIT_FAIL


def _format_poly(coef) -> str:
    terms = []
    for j, c in enumerate(coef):
        if c == 0 and len(coef) > 1:
            continue
        terms.append(_num(c) if j == 0 else f"{_num(c)}*x" + (f"^{j}" if j > 1 else ""))
    return " + ".join(terms) or "0"


def cmd_polycheck(args) -> int:
    kernel = _kernel(args)
    xs = _xs(args)
    passed = True
    for w in _ws(args.w):
        ok = analysis.polynomial_image_check(kernel, args.poly, w, xs, r=args.r, tol=args.tol)
        r = args.r or len(np.trim_zeros(np.asarray(args.poly, dtype=float), "b")) or 1
        image = analysis.polynomial_image(args.poly, w, r)
        print(f"w={w:g}: {'pass' if ok else 'FAIL'}  image {_format_poly(image.coef)}")
        passed &= ok
    return EXIT_OK if passed else EXIT_FAIL


def cmd_gwbound(args) -> int:
    kernel = _kernel(args)
    signal = signal_from_name(args.signal)
    ok = analysis.gw_bound_check(kernel, signal, args.r, _ws(args.ws), _xs(args))
    print(f"{kernel.name} {signal.name} r={args.r}: {'pass' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _kernel_source(p: argparse.ArgumentParser, flag: str) -> None:
    p.add_argument(flag, dest=flag.lstrip("-"), help="built-in kernel name (e.g. bspline2, chi2, fejer)")
    p.add_argument("--file", "--kernel-file", dest="kernel_file", help="kernel definition file (JSON)")
    p.add_argument("--order", type=int, help="build a matched kernel of this order (with --shifts)")
    p.add_argument("--shifts", type=_floats, help="comma-separated shifts for --order")


def _window(p: argparse.ArgumentParser, default=(-math.pi, math.pi), points=1001) -> None:
    p.add_argument("--x-window", type=_pair, default=default, metavar="LO,HI")
    p.add_argument("--points", type=int, default=points)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kantorovich",
        description="Sampling Kantorovich / generalized sampling operators and their rates.",
    )
    top = parser.add_subparsers(dest="group", required=True)

    kp = top.add_parser("kernel", help="inspect, certify and build kernels")
    ksub = kp.add_subparsers(dest="command", required=True)

    p = ksub.add_parser("list", help="list built-in kernels")
    p.set_defaults(func=cmd_kernel_list)

    p = ksub.add_parser("eval", help="evaluate a kernel")
    _kernel_source(p, "--name")
    p.add_argument("--at", type=_floats, required=True, help="comma-separated points")
    p.set_defaults(func=cmd_kernel_eval)

    p = ksub.add_parser("certify", help="vanishing-moment and Fourier checks")
    _kernel_source(p, "--name")
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--grid", type=int, default=201, help="points of [0,1) for the moment check")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--k-range", type=int, default=2)
    p.add_argument("--fourier-tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_kernel_certify)

    p = ksub.add_parser("build", help="build a spline-combination kernel with vanishing moments")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--shifts", type=_floats, required=True)
    p.add_argument("--out", help="output kernel file (default: stdout)")
    p.set_defaults(func=cmd_kernel_build)

    ep = top.add_parser("experiment", help="convergence experiments")
    esub = ep.add_subparsers(dest="command", required=True)

    p = esub.add_parser("rates", help="sup errors over a w sweep and fitted slopes")
    _kernel_source(p, "--kernel")
    p.add_argument("--signal", default="sin", choices=CATALOG)
    p.add_argument("--op", default="S", help="G, S, Spi or a comma list")
    p.add_argument("--ws", type=_floats, default=list(analysis.DEFAULT_WS))
    p.add_argument("--delta", type=float, default=0.0, help="grid offset for Spi")
    p.add_argument("--expect-slope", type=_floats, help="expected slope per operator")
    p.add_argument("--slope-tol", type=float, default=0.15)
    _window(p)
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.add_argument("--svg", help="optional log-log SVG plot")
    p.set_defaults(func=cmd_rates)

    p = esub.add_parser("saturate", help="w (S_w f - f) against f'/2")
    _kernel_source(p, "--kernel")
    p.add_argument("--signal", default="sin", choices=CATALOG)
    p.add_argument("--ws", type=_floats, default=[32, 64, 128, 256, 512])
    _window(p)
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.add_argument("--svg")
    p.set_defaults(func=cmd_saturate)

    p = esub.add_parser("polycheck", help="S_w maps polynomials to explicit polynomials")
    _kernel_source(p, "--kernel")
    p.add_argument("--poly", type=_floats, required=True, help="ascending coefficients")
    p.add_argument("--w", type=_floats, default=[10.0])
    p.add_argument("--r", type=int)
    p.add_argument("--tol", type=float, default=analysis.IMAGE_TOL)
    _window(p, default=(-1.0, 1.0), points=101)
    p.set_defaults(func=cmd_polycheck)

    p = esub.add_parser("gwbound", help="sup error of G_w against its moment bound")
    _kernel_source(p, "--kernel")
    p.add_argument("--signal", default="sin", choices=CATALOG)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--ws", type=_floats, default=list(analysis.DEFAULT_WS))
    _window(p)
    p.set_defaults(func=cmd_gwbound)

    return parser


# Options whose values may start with a minus sign ("--shifts -1,0.5").
_NUMERIC_OPTS = frozenset(
    {"--shifts", "--ws", "--at", "--poly", "--w", "--expect-slope", "--x-window", "--delta"}
)
_NEGATIVE = re.compile(r"-\.?\d")


def _join_negative_values(argv: list[str]) -> list[str]:
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _NUMERIC_OPTS and i + 1 < len(argv) and _NEGATIVE.match(argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_join_negative_values(argv))
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (ConfigError, KantorovichError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
