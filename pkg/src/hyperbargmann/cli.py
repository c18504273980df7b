"""Command-line front end: basis fields, transforms, quadrature rules, verification.

Exit codes: 0 success, 1 a verification check failed, 2 usage or parameter error.
"""

from __future__ import annotations

import argparse
import math
import os
import re
import sys

import numpy as np

from .checks import SUITES, TOLERANCES, run_suite, write_report
from .coherent import RadialFunction, combo_input, inner_halfline, powerexp_input, psi_input
from .eigenspace import GridField, basis_table
from .params import ParameterError, make_params
from .quadrature import DEFAULT_HALFLINE_ORDER, QuadratureError, disk_rule, gauss_laguerre, write_rule_csv
from .transform import transform_values

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

DEFAULT_GRID = "200:256:0.999"
# full-disk rule used for the norm summary of a transform
NORM_GRID = (64, 128)


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# flag parsing


def parse_grid(text: str):
    """``n_r:n_theta:r_max``; r_max ``full`` (or 1) selects the full-disk rule."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"--grid expects n_r:n_theta:r_max, got {text!r}")
    try:
        n_r, n_theta = int(parts[0]), int(parts[1])
    except ValueError:
        raise UsageError(f"--grid: n_r and n_theta must be integers, got {text!r}") from None
    r_max = parts[2].strip().lower()
    if r_max in ("full", "1", "1.0"):
        return n_r, n_theta, None
    try:
        return n_r, n_theta, float(r_max)
    except ValueError:
        raise UsageError(f"--grid: bad r_max {parts[2]!r}") from None


def parse_krange(text: str) -> list[int]:
    """``3`` or ``0..3`` (inclusive)."""
    match = re.fullmatch(r"\s*(\d+)\s*(?:\.\.\s*(\d+)\s*)?", text)
    if not match:
        raise UsageError(f"--k expects an index or a range a..b, got {text!r}")
    lo = int(match.group(1))
    hi = int(match.group(2)) if match.group(2) is not None else lo
    if hi < lo:
        raise UsageError(f"--k range is empty: {text!r}")
    return list(range(lo, hi + 1))


def parse_tolerances(items) -> dict:
    out = {}
    for item in items or []:
        name, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"--tol expects name=value, got {item!r}")
        if name not in TOLERANCES:
            raise UsageError(f"--tol: unknown check {name!r}")
        try:
            tol = float(val)
        except ValueError:
            raise UsageError(f"--tol: bad value in {item!r}") from None
        if not tol > 0:
            raise UsageError(f"--tol: tolerance for {name} must be positive")
        out[name] = tol
    return out


def parse_input(params, text: str) -> RadialFunction:
    """psi:k | combo:c0,c1,... | powerexp:a,b."""
    kind, sep, arg = text.partition(":")
    if not sep:
        raise UsageError(f"--input expects kind:args, got {text!r}")
    try:
        if kind == "psi":
            k = int(arg)
            if k < 0:
                raise UsageError("--input psi:k needs k >= 0")
            return psi_input(params, k)
        if kind == "combo":
            coeffs = [float(c) for c in arg.split(",") if c.strip()]
            return combo_input(params, coeffs)
        if kind == "powerexp":
            a, b = (float(c) for c in arg.split(","))
            return powerexp_input(a, b)
    except UsageError:
        raise
    except ValueError as exc:
        raise UsageError(f"--input {text!r}: {exc}") from None
    raise UsageError(f"--input: unknown kind {kind!r} (psi, combo, powerexp)")


# ---------------------------------------------------------------------------
# commands


def _grid_comment(grid):
    n_r, n_theta, r_max = grid
    return f"{n_r}:{n_theta}:{'full' if r_max is None else repr(r_max)}"


def cmd_basis(args) -> int:
    params = make_params(args.nu, args.m)
    ks = parse_krange(args.k)
    grid = parse_grid(args.grid)
    rule = disk_rule(params, *grid)
    table = basis_table(params, max(ks), rule.z)
    out = args.out or "."
    os.makedirs(out, exist_ok=True)
    for k in ks:
        path = os.path.join(out, f"basis_nu{params.nu:g}_m{params.m}_k{k}.csv")
        GridField(rule, table[k]).to_csv(path, {"nu": repr(params.nu), "m": params.m, "k": k,
                                                "grid": _grid_comment(grid)})
        print(path)
    return EXIT_OK


def cmd_transform(args) -> int:
    params = make_params(args.nu, args.m)
    fn = parse_input(params, args.input)
    fn.check_admissible()
    grid = parse_grid(args.grid)
    order = args.quad_order
    rule = disk_rule(params, *grid)
    field = GridField(rule, transform_values(params, fn, rule.z, order, check=args.check))
    out = args.out or "transform.csv"
    field.to_csv(out, {"nu": repr(params.nu), "m": params.m, "input": fn.label,
                       "grid": _grid_comment(grid), "quad_order": order})
    norm_in = math.sqrt(abs(inner_halfline(fn, fn, order)))
    full = disk_rule(params, *NORM_GRID)
    image = transform_values(params, fn, full.z, order)
    norm_out = math.sqrt(float(np.sum(full.weights * np.abs(image) ** 2)))
    print(out)
    print(f"norms,input={norm_in:.12f},output={norm_out:.12f},deviation={abs(norm_out - norm_in):.3e}")
    return EXIT_OK


def cmd_verify(args) -> int:
    tols = parse_tolerances(args.tol)
    if args.m is not None:
        make_params(args.nu, args.m)
    else:
        make_params(args.nu, 0)
    results = run_suite(args.suite, args.nu, args.m, args.quad_order, tols)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_report(results, fh)
    else:
        write_report(results, sys.stdout)
    failed = [r.name for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed"
          + (f"; failed: {', '.join(failed)}" if failed else ""), file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_rule(args) -> int:
    params = make_params(args.nu, args.m)
    out = args.out or "rule.csv"
    if args.halfline:
        rule = gauss_laguerre(params.alpha, args.quad_order)
    else:
        rule = disk_rule(params, *parse_grid(args.grid))
    write_rule_csv(rule, out)
    print(out)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--nu", type=float, required=True, help="magnetic parameter, > 1/2")
    common.add_argument("--quad-order", type=int, default=DEFAULT_HALFLINE_ORDER,
                        help="half-line Gauss-Laguerre order (default %(default)s)")
    common.add_argument("--out", help="output file (directory for basis)")
    gridded = argparse.ArgumentParser(add_help=False)
    gridded.add_argument("--grid", default=DEFAULT_GRID,
                         help="n_r:n_theta:r_max, r_max 'full' for the full-disk rule "
                              "(default %(default)s)")

    parser = argparse.ArgumentParser(prog="hyperbargmann", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("basis", parents=[common, gridded], help="write Phi_k fields on a polar grid")
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--k", default="0", help="index or inclusive range a..b")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("transform", parents=[common, gridded], help="transform a built-in input")
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--input", required=True, help="psi:k | combo:c0,c1,... | powerexp:a,b")
    p.add_argument("--check", action="store_true", help="order-doubling check per target")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("--m", type=int, default=None, help="level (default: every admissible level)")
    p.add_argument("--suite", default="all", choices=SUITES)
    p.add_argument("--tol", action="append", metavar="NAME=VALUE", help="override a tolerance")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("rule", parents=[common, gridded], help="export quadrature nodes and weights")
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--halfline", action="store_true",
                   help="export the Gauss-Laguerre rule for alpha = 2(nu-m)-1 instead")
    p.set_defaults(func=cmd_rule)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QuadratureError as exc:
        print(f"quadrature error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
