"""Relative-error tables and side-by-side formula comparisons."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from . import estimators as E
from .exact import DomainError, partition_table, progression_partition_counts

CSV_HEADER = ("n", "exact", "estimate", "rounded", "rel_err", "rel_err_rounded")


def relative_error(exact, estimate):
    """Signed ``(estimate - exact) / exact``.

    Evaluated as a ratio of exact rationals and rounded once at the end, so the
    result is good to a double ulp however many digits ``exact`` has.
    """
    if exact == 0:
        raise DomainError("relative error undefined for exact value 0")
    if not math.isfinite(estimate):
        raise DomainError(f"estimate {estimate} is not finite")
    return float((Fraction(estimate) - exact) / exact)


@dataclass(frozen=True)
class ErrorRow:
    n: int
    exact: int
    estimate: float
    rounded: int
    rel_err: float
    rel_err_rounded: float


@dataclass
class ErrorTable:
    formula: str
    lo: int
    hi: int
    step: int
    rows: list
    skipped: list = field(default_factory=list)

    @property
    def summary(self):
        if not self.rows:
            return {"max_abs_rel_err": None, "mean_abs_rel_err": None, "argmax": None}
        mags = [abs(r.rel_err) for r in self.rows]
        i = max(range(len(mags)), key=mags.__getitem__)
        return {
            "max_abs_rel_err": mags[i],
            "mean_abs_rel_err": math.fsum(mags) / len(mags),
            "argmax": self.rows[i].n,
        }

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.rows:
            w.writerow(
                (r.n, r.exact, _fmt(r.estimate), r.rounded, _fmt(r.rel_err), _fmt(r.rel_err_rounded))
            )
        return buf.getvalue()

    def to_json(self):
        payload = {
            "formula": self.formula,
            "range": [self.lo, self.hi, self.step],
            "rows": [
                {
                    "n": r.n,
                    "exact": str(r.exact),
                    "estimate": _fmt(r.estimate),
                    "rounded": r.rounded,
                    "rel_err": _fmt(r.rel_err),
                    "rel_err_rounded": _fmt(r.rel_err_rounded),
                }
                for r in self.rows
            ],
            "skipped": self.skipped,
            "summary": self.summary,
        }
        return json.dumps(payload, indent=2) + "\n"


def _fmt(x):
    return format(x, ".12g")


def _exact_values(formula, hi, a, b):
    if formula is E.Formula.INGHAM_GENERAL:
        if a != int(a) or b != int(b):
            raise DomainError("exact counts for ingham-general need integer a, b")
        return progression_partition_counts(hi, int(a), int(b))
    table = partition_table(hi)
    return table.p if formula in E.P_TARGETS else table.h


def error_table(formula, lo, hi, step=1, *, a=1, b=2):
    """One :class:`ErrorRow` per in-domain ``n`` in ``range(lo, hi + 1, step)``.

    Rows whose exact value is 0 (``h(1)``) are skipped, as are ``n`` outside the
    formula's domain; skipped indices are listed in ``ErrorTable.skipped``.
    """
    formula = E.Formula.parse(formula) if isinstance(formula, str) else E.Formula(formula)
    if formula is E.Formula.AULUCK_PQ:
        raise DomainError("auluck-pq depends on q; tabulate it directly")
    if step < 1:
        raise DomainError("step must be >= 1")
    ns = list(range(max(lo, 0), hi + 1, step))
    if lo > hi or not ns:
        raise DomainError(f"empty range {lo}:{hi}:{step}")
    d_lo, d_hi = E.domain(formula)
    exact = _exact_values(formula, hi, a, b)
    rows, skipped = [], []
    for n in ns:
        if n < d_lo or (d_hi is not None and n > d_hi) or exact[n] == 0:
            skipped.append(n)
            continue
        est = E.estimate(formula, n, a=a, b=b)
        rows.append(
            ErrorRow(
                n,
                exact[n],
                est.value,
                est.rounded,
                relative_error(exact[n], est.value),
                relative_error(exact[n], float(est.rounded)),
            )
        )
    if not rows:
        raise DomainError(f"no in-domain n for {formula.value} in {lo}:{hi}:{step}")
    return ErrorTable(formula.value, lo, hi, step, rows, skipped)


@dataclass
class Comparison:
    formulas: list
    winners: list  # (n, winning formula or "tie")
    summaries: dict

    def win_counts(self):
        counts = {f: 0 for f in self.formulas}
        counts["tie"] = 0
        for _, w in self.winners:
            counts[w] += 1
        return counts

    def to_json(self):
        return json.dumps(
            {
                "formulas": self.formulas,
                "winners": [{"n": n, "winner": w} for n, w in self.winners],
                "win_counts": self.win_counts(),
                "summaries": self.summaries,
            },
            indent=2,
        ) + "\n"


def compare_formulas(formulas, lo, hi, step=1):
    """Per-n best formula (smallest |rel_err|) plus each formula's summary.

    Only ``n`` inside every formula's domain are compared.
    """
    if len(formulas) < 2:
        raise DomainError("compare needs at least two formulas")
    tables = [error_table(f, lo, hi, step) for f in formulas]
    names = [t.formula for t in tables]
    if len(set(names)) != len(names):
        raise DomainError(f"duplicate formula in {formulas}")
    by_n = [{r.n: r for r in t.rows} for t in tables]
    common = sorted(set.intersection(*(set(m) for m in by_n)))
    winners = []
    for n in common:
        errs = [abs(m[n].rel_err) for m in by_n]
        best = min(errs)
        who = [name for name, e in zip(names, errs) if e == best]
        winners.append((n, who[0] if len(set(who)) == 1 else "tie"))
    summaries = {}
    for name, m in zip(names, by_n):
        mags = [abs(m[n].rel_err) for n in common]
        summaries[name] = {
            "max_abs_rel_err": max(mags) if mags else None,
            "mean_abs_rel_err": math.fsum(mags) / len(mags) if mags else None,
        }
    return Comparison(names, winners, summaries)


def small_n_exceptions(formula, lo, hi):
    """``n`` in ``[lo, hi]`` where the rounded estimate differs from the exact count."""
    table = error_table(formula, lo, hi)
    return [r.n for r in table.rows if r.rounded != r.exact]


def row_dict(row):
    return asdict(row)
