"""Command line front end.

Exit codes: 0 success, 1 cross-method mismatch (``exact --verify``),
2 domain or usage error, 3 degenerate fit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import estimators as E
from . import exact as X
from . import fitting as F
from . import report as R

EXIT_MISMATCH = 1
EXIT_DOMAIN = 2
EXIT_DEGENERATE = 3
DEFAULT_MAX_N = 10 ** 6

METHODS = ("recursion", "difference", "sum-pq", "oracle")


class UsageError(Exception):
    pass


def parse_range(text):
    """``lo:hi[:step]`` -> ``(lo, hi, step)``."""
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise UsageError(f"range must be lo:hi[:step], got {text!r}")
    try:
        lo, hi = int(parts[0]), int(parts[1])
        step = int(parts[2]) if len(parts) == 3 else 1
    except ValueError:
        raise UsageError(f"range must be integers, got {text!r}") from None
    if lo > hi or step < 1 or lo < 0:
        raise UsageError(f"need 0 <= lo <= hi and step >= 1, got {text!r}")
    return lo, hi, step


def _check_max(n, args):
    if n > args.max_n:
        raise X.DomainError(f"n={n} exceeds --max-n {args.max_n}")


def _exact_by(method, n, bound):
    if method == "recursion":
        return X.h_exact_recursion(n)
    if method == "difference":
        return X.h_exact_difference(n)
    if method == "sum-pq":
        if n < 2:
            raise X.DomainError("sum-pq needs n >= 2")
        return X.h_exact_sum_pq(n)
    if n < 2:
        raise X.DomainError("oracle equals h only for n >= 2")
    return X.oracle_count(n, 2, bound=bound)


def cmd_exact(args, out):
    n = args.n
    if n < 0:
        raise X.DomainError("n must be >= 0")
    _check_max(n, args)
    bound = args.oracle_bound if args.oracle_bound is not None else X.oracle_bound()
    if not args.verify:
        out.write(f"{_exact_by(args.method, n, bound)}\n")
        return 0
    methods = ["recursion", "difference"]
    if n >= 2:
        methods.append("sum-pq")
        if n <= bound:
            methods.append("oracle")
    values = {m: _exact_by(m, n, bound) for m in methods}
    first = values["recursion"]
    out.write(f"{first}\n")
    for m in methods:
        out.write(f"  {m}: {'ok' if values[m] == first else 'MISMATCH ' + str(values[m])}\n")
    return 0 if all(v == first for v in values.values()) else EXIT_MISMATCH


def cmd_estimate(args, out):
    formula = E.Formula.parse(args.formula)
    est = E.estimate(formula, args.n, a=args.a, b=args.b, q=args.q)
    if args.round:
        out.write(f"{est.rounded}\n")
    else:
        out.write(f"{format(est.value, '.12g')}\n")
    return 0


def _emit_rows(header, rows, fmt, out):
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    elif fmt == "json":
        out.write(json.dumps([dict(zip(header, map(str, r))) for r in rows], indent=2) + "\n")
    else:
        for r in rows:
            out.write(" ".join(str(v) for v in r) + "\n")


def cmd_table(args, out):
    lo, hi, step = parse_range(args.range)
    _check_max(hi, args)
    table = X.partition_table(hi)
    rows = [(n, table.h[n]) for n in range(lo, hi + 1, step)]
    _emit_rows(("n", "h"), rows, args.format, out)
    return 0


def cmd_errors(args, out):
    lo, hi, step = parse_range(args.range)
    table = R.error_table(args.formula, lo, hi, step, a=args.a, b=args.b)
    if args.format == "csv":
        out.write(table.to_csv())
    elif args.format == "json":
        out.write(table.to_json())
    else:
        for r in table.rows:
            out.write(f"{r.n} {r.exact} {format(r.estimate, '.12g')} {format(r.rel_err, '.6e')}\n")
        s = table.summary
        out.write(
            f"max |rel_err| = {s['max_abs_rel_err']:.6e} at n = {s['argmax']}; "
            f"mean |rel_err| = {s['mean_abs_rel_err']:.6e}\n"
        )
    return 0


def cmd_fit(args, out):
    target = args.target.lower()
    if target not in F.FIT_TARGETS:
        raise UsageError(f"unknown fit target {args.target!r}; choose from {sorted(F.FIT_TARGETS)}")
    lo, hi, step = parse_range(args.grid)
    grid = F.SampleGrid.from_range(lo, hi, step)
    result = F.FIT_TARGETS[target](X.partition_table(hi), grid)
    out.write(json.dumps(result.to_json(), indent=2) + "\n")
    return 0


def cmd_compare(args, out):
    lo, hi, step = parse_range(args.range)
    formulas = [f for f in args.formulas.split(",") if f]
    cmp = R.compare_formulas(formulas, lo, hi, step)
    if args.format == "json":
        out.write(cmp.to_json())
    elif args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(("n", "winner"))
        w.writerows(cmp.winners)
    else:
        for name, s in cmp.summaries.items():
            out.write(f"{name}: max |rel_err| {s['max_abs_rel_err']:.6e}, mean {s['mean_abs_rel_err']:.6e}\n")
        out.write("wins: " + ", ".join(f"{k}={v}" for k, v in cmp.win_counts().items()) + "\n")
    return 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="derangement-classes",
        description="Exact and estimated counts of conjugacy classes of derangements.",
    )
    p.add_argument("--max-n", type=int, default=DEFAULT_MAX_N, help="largest n accepted by exact/table")
    p.add_argument("-o", "--output", help="write to this file instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("exact", help="exact h(n)")
    s.add_argument("n", type=int)
    s.add_argument("--method", choices=METHODS, default="recursion")
    s.add_argument("--verify", action="store_true", help="run every applicable method and compare")
    s.add_argument("--oracle-bound", type=int, default=None,
                   help=f"enumeration limit (default ${X.ORACLE_BOUND_ENV} or {X.DEFAULT_ORACLE_BOUND})")
    s.set_defaults(func=cmd_exact)

    s = sub.add_parser("estimate", help="closed-form estimate")
    s.add_argument("n", type=int)
    s.add_argument("--formula", required=True)
    s.add_argument("--round", action="store_true")
    s.add_argument("--a", type=float, default=1.0)
    s.add_argument("--b", type=float, default=2.0)
    s.add_argument("--q", type=int, default=None)
    s.set_defaults(func=cmd_estimate)

    for name, func, extra in (("table", cmd_table, None), ("errors", cmd_errors, "formula")):
        s = sub.add_parser(name)
        if extra:
            s.add_argument("formula")
            s.add_argument("--a", type=float, default=1.0)
            s.add_argument("--b", type=float, default=2.0)
        s.add_argument("range", help="lo:hi[:step]")
        s.add_argument("--format", choices=("text", "csv", "json"), default="text")
        s.set_defaults(func=func)

    s = sub.add_parser("fit", help="refit constants from exact data, print JSON")
    s.add_argument("target", help="one of " + ", ".join(F.FIT_TARGETS))
    s.add_argument("--grid", default=f"{F.GRID_START}:{F.GRID_STOP}:{F.GRID_STEP}")
    s.set_defaults(func=cmd_fit)

    s = sub.add_parser("compare", help="compare formulas on a range")
    s.add_argument("formulas", help="comma separated formula names")
    s.add_argument("range")
    s.add_argument("--format", choices=("text", "csv", "json"), default="text")
    s.set_defaults(func=cmd_compare)
    return p


def main(argv=None, stdout=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse already printed usage; report its status instead of exiting.
        return exc.code
    buf = io.StringIO()
    try:
        code = args.func(args, buf)
    except (X.DomainError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (F.DegenerateFitError, ZeroDivisionError) as exc:
        print(f"error: degenerate fit: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    text = buf.getvalue()
    if args.output:
        with open(args.output, "w", newline="\n") as fh:
            fh.write(text)
    else:
        (stdout or sys.stdout).write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
