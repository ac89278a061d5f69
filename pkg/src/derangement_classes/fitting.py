"""Least-squares refits of the estimator constants from exact h(n) data.

Data series are built in multiprecision (the targets are small differences of
large logarithms) and handed out as floats.  One-parameter objectives use the
closed-form slope/intercept; multi-term bases solve the normal equations by
Gaussian elimination in multiprecision, because the raw normal matrix for a
basis like ``{n^1.5, n, n^0.5, 1}`` on ``80..8000`` is far too ill-conditioned
for doubles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from . import constants as K
from .exact import DomainError, partition_table

GRID_START = 80
GRID_STOP = 8000
GRID_STEP = 20
_DPS = 50


class DegenerateFitError(ArithmeticError):
    """The least-squares problem has no unique solution."""


@dataclass(frozen=True)
class SampleGrid:
    points: tuple

    @classmethod
    def standard(cls):
        # n = 60 + 20k, k = 1..397
        return cls(tuple(60 + 20 * k for k in range(1, 398)))

    @classmethod
    def from_range(cls, lo, hi, step):
        if step < 1 or lo > hi:
            raise DomainError(f"bad grid {lo}:{hi}:{step}")
        return cls(tuple(range(lo, hi + 1, step)))

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class DataSeries:
    xs: tuple
    ys: tuple
    label: str = ""

    def __post_init__(self):
        if len(self.xs) != len(self.ys) or len(self.xs) < 2:
            raise DomainError("series needs >= 2 points and equal lengths")
        if any(b <= a for a, b in zip(self.xs, self.xs[1:])):
            raise DomainError("xs must be strictly increasing")


@dataclass(frozen=True)
class LinearFit:
    a: float
    b: float
    rms: float


@dataclass
class FitResult:
    target: str
    coefficients: list
    objective_value: float
    paper_values: list
    condition_number: float = float("nan")
    metadata: dict = field(default_factory=dict)

    @property
    def max_rel_deviation(self):
        return max(
            abs(c - p) / abs(p) for c, p in zip(self.coefficients, self.paper_values)
        )

    def to_json(self):
        return {
            "target": self.target,
            "coefficients": list(self.coefficients),
            "objective_value": self.objective_value,
            "paper_values": list(self.paper_values),
            "max_rel_deviation": self.max_rel_deviation,
            "condition_number": self.condition_number,
            "metadata": dict(self.metadata),
        }


def linear_lsq(series):
    """Fit ``y = a x + b`` with the closed-form least-squares solution.

    Means are subtracted before forming the moments, which is the same
    estimator as ``a = (mean(xy) - mean(x) mean(y)) / (mean(x^2) - mean(x)^2)``
    without the cancellation.
    """
    return _linear_lsq_arrays(*_as_arrays(series))


def _linear_lsq_arrays(x, y):
    if x.size < 2:
        raise DegenerateFitError("need at least two points")
    xm = x.mean()
    ym = y.mean()
    dx = x - xm
    sxx = float(dx @ dx)
    if sxx == 0.0 or not math.isfinite(sxx):
        raise DegenerateFitError("all x values are equal")
    a = float(dx @ (y - ym)) / sxx
    b = ym - a * xm
    resid = y - (a * x + b)
    return LinearFit(a, float(b), math.sqrt(float(resid @ resid) / x.size))


# -- data series ------------------------------------------------------------

def _table_for(points):
    top = max(points)
    return partition_table(top)


def _mp_growth_over_h(n, hn):
    """pi * exp(pi sqrt(2n/3)) / (12 sqrt(2) h(n)) in multiprecision."""
    with mpmath.workdps(_DPS):
        n = mpmath.mpf(n)
        g = mpmath.exp(mpmath.pi * mpmath.sqrt(2 * n / 3))
        return mpmath.pi * g / (12 * mpmath.sqrt(2) * mpmath.mpf(hn))


def c1_value(n, hn):
    """(3 / (2 pi^2)) * ln(12 sqrt(2 n^3) h(n) / pi)^2 - n, the exponent shift."""
    with mpmath.workdps(_DPS):
        n = mpmath.mpf(n)
        lg = mpmath.log(12 * mpmath.sqrt(2 * n ** 3) * mpmath.mpf(hn) / mpmath.pi)
        return float(3 / (2 * mpmath.pi ** 2) * lg ** 2 - n)


def build_c1_series(table=None, grid=None):
    grid = grid or SampleGrid.standard()
    table = table or _table_for(grid.points)
    if table.max_n < max(grid.points):
        raise DomainError("table does not cover the grid")
    ys = tuple(c1_value(n, table.h[n]) for n in grid.points)
    return DataSeries(tuple(float(n) for n in grid.points), ys, "C1")


def denominator_series(table=None, grid=None, subtract_leading=False):
    """Samples of pi exp(pi sqrt(2n/3)) / (12 sqrt(2) h(n)), optionally minus n^1.5."""
    grid = grid or SampleGrid.standard()
    table = table or _table_for(grid.points)
    ys = []
    for n in grid.points:
        v = _mp_growth_over_h(n, table.h[n])
        if subtract_leading:
            with mpmath.workdps(_DPS):
                v = v - mpmath.mpf(n) ** 1.5
        ys.append(float(v))
    label = "C5" if subtract_leading else "C4"
    return DataSeries(tuple(float(n) for n in grid.points), tuple(ys), label)


def c7_series(table=None, grid=None):
    """Samples of pi^2 exp(pi sqrt(2n/3)) / (24 sqrt(3) n^2 (I_g(n) - h(n)))."""
    grid = grid or SampleGrid.standard()
    table = table or _table_for(grid.points)
    ys = []
    bad = []
    with mpmath.workdps(_DPS):
        for n in grid.points:
            m = mpmath.mpf(n)
            g = mpmath.exp(mpmath.pi * mpmath.sqrt(2 * m / 3))
            ig = mpmath.pi * g / (12 * mpmath.sqrt(2 * m ** 3))
            gap = ig - table.h[n]
            if gap <= 0:
                bad.append(n)
                continue
            ys.append(float(mpmath.pi ** 2 * g / (24 * mpmath.sqrt(3) * m ** 2 * gap)))
    if bad:
        raise DomainError(f"I_g(n) <= h(n) at n = {bad}")
    return DataSeries(tuple(float(n) for n in grid.points), tuple(ys), "C7")


# -- exponent-shift objectives ------------------------------------------------

def _as_arrays(series):
    return np.asarray(series.xs, dtype=float), np.asarray(series.ys, dtype=float)


def _regressor(x, e1, c1):
    shifted = x + c1
    if np.any(shifted <= 0):
        raise DomainError(f"n + c1 <= 0 on the grid for c1={c1}")
    return shifted ** (-e1)


def g3_fit(e1, c1, series):
    """Best ``(a1, b1)`` and mean squared residual for regressor ``(n + c1)^-e1``."""
    x, y = _as_arrays(series)
    fit = _linear_lsq_arrays(_regressor(x, e1, c1), y)
    return fit, fit.rms ** 2


def g3_objective(e1, c1, series):
    return g3_fit(e1, c1, series)[1]


def g2_objective(c1, series):
    """Mean squared residual of ``a1/sqrt(n + c1) + b1`` with a1, b1 eliminated."""
    return g3_objective(0.5, c1, series)


def golden_section(f, lo, hi, tol):
    """Minimise a unimodal ``f`` on ``[lo, hi]``; returns the final bracket midpoint."""
    if not lo < hi:
        raise DomainError("need lo < hi")
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def minimize_g2(lo=-50.0, hi=100.0, tol=1e-7, series=None):
    series = series or build_c1_series()
    c1 = golden_section(lambda c: g2_objective(c, series), lo, hi, tol)
    fit, g2 = g3_fit(0.5, c1, series)
    a1, b1, c1_paper = K.get("c1_exponent")
    return FitResult(
        "C1_EXPONENT",
        [fit.a, fit.b, c1],
        math.sqrt(g2),
        [a1, b1, c1_paper],
        metadata={"bracket": [lo, hi], "tol": tol, "grid": _grid_meta(series)},
    )


def grid_min_g3(e_range=(0.1, 0.9), c_range=(-50.0, 100.0), steps=(33, 31), series=None):
    """Evaluate G3 on a lattice and return ``(e1*, c1*, values)``.

    ``values[i][j]`` is G3 at ``e_i``, ``c_j``; lattice points where the regressor
    is undefined hold ``inf``.
    """
    series = series or build_c1_series()
    es = np.linspace(e_range[0], e_range[1], steps[0])
    cs = np.linspace(c_range[0], c_range[1], steps[1])
    values = np.full((len(es), len(cs)), np.inf)
    for i, e in enumerate(es):
        for j, c in enumerate(cs):
            try:
                values[i, j] = g3_objective(float(e), float(c), series)
            except DomainError:
                pass
    i, j = np.unravel_index(np.argmin(values), values.shape)
    return float(es[i]), float(cs[j]), values, es, cs


def refine_g3(e1, c1, series=None, tol=1e-9, rounds=40):
    """Coordinate-wise golden-section refinement of a G3 lattice minimum."""
    series = series or build_c1_series()
    lo_c = -min(series.xs) + 1e-6
    for _ in range(rounds):
        e_new = golden_section(lambda e: g3_objective(e, c1, series), max(0.05, e1 - 0.05), min(0.95, e1 + 0.05), tol)
        c_new = golden_section(lambda c: g3_objective(e_new, c, series), max(lo_c, c1 - 5.0), c1 + 5.0, tol)
        done = abs(e_new - e1) < tol and abs(c_new - c1) < tol
        e1, c1 = e_new, c_new
        if done:
            break
    return e1, c1


def local_minima(values):
    """Lattice points strictly below all of their (up to 8) finite neighbours."""
    rows, cols = values.shape
    found = []
    for i in range(rows):
        for j in range(cols):
            v = values[i, j]
            if not np.isfinite(v):
                continue
            neigh = [
                values[i + di, j + dj]
                for di in (-1, 0, 1)
                for dj in (-1, 0, 1)
                if (di or dj) and 0 <= i + di < rows and 0 <= j + dj < cols
            ]
            if all(v < w for w in neigh if np.isfinite(w)):
                found.append((i, j))
    return found


def g1_grid(a_values, c_values, series=None):
    """G1(a1, c1) with b1 eliminated, as rows ``(a1, c1, G1)`` for external plotting."""
    series = series or build_c1_series()
    x, y = _as_arrays(series)
    rows = []
    for c in c_values:
        r = _regressor(x, 0.5, c)
        for a in a_values:
            resid = y - a * r
            resid = resid - resid.mean()
            rows.append((float(a), float(c), float(resid @ resid) / x.size))
    return rows


# -- multi-term least squares -----------------------------------------------

def solve_normal_equations(basis_columns, ys):
    """Coefficients minimising ``sum (y - sum_j c_j phi_j)^2``.

    ``basis_columns`` is a list of per-basis sample lists.  Elimination with
    partial pivoting runs in multiprecision; returns ``(coeffs, cond)`` where
    ``cond`` is the 2-norm condition number of the (double) normal matrix.
    """
    k = len(basis_columns)
    if len(ys) < k:
        raise DegenerateFitError(f"{len(ys)} samples cannot determine {k} coefficients")
    with mpmath.workdps(_DPS):
        cols = [[mpmath.mpf(v) for v in col] for col in basis_columns]
        y = [mpmath.mpf(v) for v in ys]
        A = [[mpmath.fsum(a * b for a, b in zip(cols[i], cols[j])) for j in range(k)] for i in range(k)]
        rhs = [mpmath.fsum(a * b for a, b in zip(cols[i], y)) for i in range(k)]
        M = [row[:] + [r] for row, r in zip(A, rhs)]
        # Pivots this far below the matrix scale mean a rank-deficient basis.
        tiny = max(abs(v) for row in A for v in row) * mpmath.mpf(10) ** (-(_DPS - 10))
        for col in range(k):
            piv = max(range(col, k), key=lambda r: abs(M[r][col]))
            if abs(M[piv][col]) <= tiny:
                raise DegenerateFitError("singular normal matrix")
            M[col], M[piv] = M[piv], M[col]
            for r in range(col + 1, k):
                f = M[r][col] / M[col][col]
                for c in range(col, k + 1):
                    M[r][c] -= f * M[col][c]
        sol = [mpmath.mpf(0)] * k
        for r in range(k - 1, -1, -1):
            acc = M[r][k] - mpmath.fsum(M[r][c] * sol[c] for c in range(r + 1, k))
            sol[r] = acc / M[r][r]
        coeffs = [float(v) for v in sol]
        cond = float(np.linalg.cond(np.array([[float(v) for v in row] for row in A])))
    return coeffs, cond


def _multifit(target, series, exponents, paper_key, extra_meta=None):
    xs = series.xs
    cols = [[x ** e for x in xs] for e in exponents]
    coeffs, cond = solve_normal_equations(cols, series.ys)
    resid = [y - sum(c * col[i] for c, col in zip(coeffs, cols)) for i, y in enumerate(series.ys)]
    rms = math.sqrt(sum(r * r for r in resid) / len(resid))
    meta = {"basis_exponents": list(exponents)}
    meta.update(extra_meta or {})
    return FitResult(target, coeffs, rms, list(K.get(paper_key)) if paper_key else [], cond, meta)


def _grid_meta(series):
    xs = series.xs
    return {"first": xs[0], "last": xs[-1], "count": len(xs)}


def fit_c4(table=None, grid=None):
    s = denominator_series(table, grid)
    return _multifit("C4", s, (1.5, 1.0, 0.5, 0.0), "c4", {"grid": _grid_meta(s)})


def fit_c5(table=None, grid=None):
    s = denominator_series(table, grid, subtract_leading=True)
    return _multifit("C5", s, (1.0, 0.5, 0.0), "c5", {"grid": _grid_meta(s)})


def fit_c5_linear(table=None, grid=None):
    s = denominator_series(table, grid, subtract_leading=True)
    return _multifit("C5_LINEAR", s, (1.0, 0.0), "c5_linear", {"grid": _grid_meta(s)})


C7_FORMS = {
    "A": ((-0.5, -1.0, -1.5, -2.0, 0.0), "c7a"),
    "B": ((-0.5, -1.0, -1.5, 0.0), "c7b"),
    # Shapes tried and discarded in favour of A and B.
    "INV_N": ((-1.0, 0.0), None),
    "INV_N_N2": ((-1.0, -2.0, 0.0), None),
    "INV_SQRT": ((-0.5, 0.0), None),
}


def fit_c7(form="A", table=None, grid=None):
    form = form.upper()
    if form not in C7_FORMS:
        raise DomainError(f"unknown C7 form {form!r}")
    exponents, key = C7_FORMS[form]
    s = c7_series(table, grid)
    return _multifit("C7" + form if key else "C7_" + form, s, exponents, key, {"grid": _grid_meta(s)})


def c8_series(table=None, parity=1):
    table = table or partition_table(100)
    ns = [n for n in range(3, 101) if n % 2 == parity]
    ys = []
    for n in ns:
        with mpmath.workdps(_DPS):
            ys.append(float(_mp_growth_over_h(n, table.h[n]) - mpmath.mpf(n) ** 1.5))
    return DataSeries(tuple(float(n) for n in ns), tuple(ys), "C8_ODD" if parity else "C8_EVEN")


def fit_c8(table=None):
    """Separate ``{n, sqrt n, 1}`` fits for odd n in 3..99 and even n in 4..100."""
    odd = _multifit("C8_ODD", c8_series(table, 1), (1.0, 0.5, 0.0), "c8_odd")
    even = _multifit("C8_EVEN", c8_series(table, 0), (1.0, 0.5, 0.0), "c8_even")
    return odd, even


def evaluate_basis(coeffs, exponents, xs):
    return [sum(c * x ** e for c, e in zip(coeffs, exponents)) for x in xs]


def rms_of(coeffs, exponents, series):
    pred = evaluate_basis(coeffs, exponents, series.xs)
    return math.sqrt(sum((y - p) ** 2 for y, p in zip(series.ys, pred)) / len(pred))


FIT_TARGETS = {
    "c1": lambda table, grid: minimize_g2(series=build_c1_series(table, grid)),
    "c4": fit_c4,
    "c5": fit_c5,
    "c5-linear": fit_c5_linear,
    "c7a": lambda table, grid: fit_c7("A", table, grid),
    "c7b": lambda table, grid: fit_c7("B", table, grid),
    "c8-odd": lambda table, grid: fit_c8(table)[0],
    "c8-even": lambda table, grid: fit_c8(table)[1],
}
