"""Command-line front end.

Exit status: 0 on success, 1 when a verification check fails or a sum does
not converge, 2 on usage or domain errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

from .analysis import (
    ZPoint,
    derivative_nondyadic,
    format_graph_csv,
    graph_samples,
    invert_zstar,
    left_derivative,
    right_derivative,
    zstar,
    zstar_via_index,
)
from .errors import DomainError, NotConverged
from .index import Dyadic, parse_index, parse_point
from .series import TruncationParams, evaluate_index
from .verify import CRITERIA, row_fields, run_criterion

DIVERGENT_TEXT = "+inf (divergent index (2,{1}^inf))"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def fmt(x: float) -> str:
    if math.isinf(x):
        return "+inf" if x > 0 else "-inf"
    return f"{x:.15g}"


def fmt_err(x: float) -> str:
    return f"{x:.3e}"


def _emit(fields: List[str], rows: List[List[str]], style: str, out) -> None:
    if style == "json":
        json.dump([dict(zip(fields, r)) for r in rows], out, indent=2)
        out.write("\n")
    elif style == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(fields)
        w.writerows(rows)
    else:
        out.write("\t".join(fields) + "\n")
        for r in rows:
            out.write("\t".join(r) + "\n")


def _params(args) -> TruncationParams:
    return TruncationParams(m_cap=int(args.mcap), tol=args.tol)


def _point(text: str) -> Fraction:
    return parse_point(text)


# --------------------------------------------------------------------------
# verbs


def cmd_eval_index(args, out) -> int:
    idx = parse_index(args.index)
    fields = ["index", "value", "err_estimate", "method"]
    if idx.is_divergent:
        rows = [[str(idx), DIVERGENT_TEXT, fmt_err(0.0), "tail-l"]]
    else:
        ev = evaluate_index(idx, _params(args))
        value = DIVERGENT_TEXT if ev.divergent else fmt(ev.value)
        rows = [[str(idx), value, fmt_err(ev.err_estimate), ev.method]]
    _emit(fields, rows, args.format, out)
    return 0


def cmd_eval_zstar(args, out) -> int:
    p = _params(args)
    z = ZPoint.of(_point(args.z))
    fields = ["z", "digits", "digit_series", "via_index", "delta"]
    if z.value == 1:
        rows = [[str(z), str(z.digits), DIVERGENT_TEXT, DIVERGENT_TEXT, "-"]]
    else:
        a = zstar(z, p)
        b = zstar_via_index(z, p)
        rows = [[str(z), str(z.digits), fmt(a.value), fmt(b.value), fmt_err(abs(a.value - b.value))]]
    _emit(fields, rows, args.format, out)
    return 0


def cmd_derivative(args, out) -> int:
    p = _params(args)
    x = _point(args.at)
    fields = ["z", "side", "value", "depth", "error_model"]
    rows = []
    if Dyadic.is_dyadic(x) and x < 1:
        sides = ["left", "right"] if args.side == "both" else [args.side]
        for side in sides:
            if side == "left":
                rep = left_derivative(x, p)
            else:
                rep = right_derivative(x, p)
            value = "DIVERGES" if rep.diverges else fmt(rep.value)
            rows.append([str(Dyadic.from_fraction(x)), side, value, str(rep.truncation_depth),
                         fmt_err(rep.error_model)])
    else:
        rep = derivative_nondyadic(x, p)
        rows.append([str(x), rep.side.value, fmt(rep.value), str(rep.truncation_depth), fmt_err(rep.error_model)])
    _emit(fields, rows, args.format, out)
    return 0


def cmd_invert(args, out) -> int:
    p = _params(args)
    z = invert_zstar(args.v, p, depth=args.depth)
    digits = "".join(map(str, z.exact.terminating_digits())) if z.exact is not None else str(z.digits)
    check = zstar(z, p).value
    fields = ["v", "z", "z_decimal", "binary", "residual"]
    rows = [[fmt(args.v), str(z), fmt(z.approx), "0." + digits, fmt_err(abs(check - args.v))]]
    _emit(fields, rows, args.format, out)
    return 0


def cmd_graph(args, out) -> int:
    rows = graph_samples(args.n, _params(args))
    text = format_graph_csv(rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        out.write(f"wrote {len(rows)} rows to {args.out}\n")
    else:
        out.write(text)
    return 0


def cmd_verify(args, out) -> int:
    p = _params(args)
    try:
        wanted = sorted(CRITERIA) if not args.criteria else [int(c) for c in args.criteria.split(",")]
    except ValueError:
        raise UsageError(f"bad --criteria {args.criteria!r}") from None
    for c in wanted:
        if c not in CRITERIA:
            raise UsageError(f"unknown criterion {c}")
    checks = []
    for c in wanted:
        checks.extend(run_criterion(c, p))
    fields = ["identity", "expected", "computed", "residual", "status"]
    rows = [row_fields(c) for c in checks]
    _emit(fields, rows, args.format, out)
    failed = sum(not c.passed for c in checks)
    if args.format == "plain":
        out.write(f"# {len(checks) - failed} passed, {failed} failed\n")
    return 1 if failed else 0


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS, help="target absolute error (1e-8)")
    common.add_argument("--mcap", type=float, default=argparse.SUPPRESS, help="cap on the summation cutoff (1e6)")
    common.add_argument("--depth", type=int, default=argparse.SUPPRESS, help="binary digits for invert (48)")
    common.add_argument("--format", choices=["plain", "json", "csv"], default=argparse.SUPPRESS)

    parser = _Parser(prog="zetastar", parents=[common],
                     description="Multiple zeta-star values of infinite indices and the map Z*.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    s = sub.add_parser("eval-index", parents=[common], help="evaluate an index such as '3,(2)' or '(2,1)'")
    s.add_argument("index")
    s.set_defaults(func=cmd_eval_index)

    s = sub.add_parser("eval-zstar", parents=[common], help="Z*(z) by the digit series and by the index")
    s.add_argument("z")
    s.set_defaults(func=cmd_eval_zstar)

    s = sub.add_parser("derivative", parents=[common], help="one-sided derivatives of Z*")
    s.add_argument("--side", choices=["left", "right", "both"], default="both")
    s.add_argument("--at", required=True)
    s.set_defaults(func=cmd_derivative)

    s = sub.add_parser("invert", parents=[common], help="z with Z*(z) = v")
    s.add_argument("v", type=float)
    s.set_defaults(func=cmd_invert)

    s = sub.add_parser("graph", parents=[common], help="CSV samples of Z* on a dyadic grid")
    s.add_argument("--n", type=int, default=1024)
    s.add_argument("--out")
    s.set_defaults(func=cmd_graph)

    s = sub.add_parser("verify", parents=[common], help="run the identity suite")
    s.add_argument("--criteria", help="comma-separated criterion numbers (default: all)")
    s.set_defaults(func=cmd_verify)
    return parser


DEFAULTS = {"tol": 1e-8, "mcap": 1e6, "depth": 48, "format": "plain"}


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        for k, v in DEFAULTS.items():
            if not hasattr(args, k):
                setattr(args, k, v)
        if not args.tol > 0 or args.mcap < 4 or args.depth < 1:
            raise UsageError("--tol must be > 0, --mcap >= 4, --depth >= 1")
        return args.func(args, out)
    except UsageError as e:
        err.write(f"usage error: {e}\n")
        return 2
    except DomainError as e:
        err.write(f"error: {type(e).__name__}: {e}\n")
        return 2
    except NotConverged as e:
        err.write(f"error: NotConverged: {e}\n")
        return 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        return run(argv)
    except SystemExit as e:  # --help
        return int(e.code or 0)


if __name__ == "__main__":
    sys.exit(main())
