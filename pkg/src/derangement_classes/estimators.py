"""Closed-form floating point estimates of h(n) and a few p(n) helpers.

Every estimator shares the growth factor ``exp(pi * sqrt(2n/3))``; they differ
in how the algebraic prefactor (or the exponent) is corrected.  Constants come
from :mod:`derangement_classes.constants`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from . import constants as K
from .exact import DomainError

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)
# pi * sqrt(2/3): the exponent rate shared by all formulas.
EXP_RATE = math.pi * math.sqrt(2.0 / 3.0)
_LOG_MAX = math.log(1.7976931348623157e308)


class Formula(str, enum.Enum):
    HR = "hr"
    IG = "ig"
    IG_ROUND = "ig-round"
    IGA = "iga"
    IGA_ROUND = "iga-round"
    IG1 = "ig1"
    IG1_ROUND = "ig1-round"
    IG2 = "ig2"
    IG2_ROUND = "ig2-round"
    IG2_LINEAR = "ig2-linear"
    IG0 = "ig0"
    IG0_ROUND = "ig0-round"
    F7A = "f7a"
    F7B = "f7b"
    H1 = "h1"
    RH0 = "rh0"
    RH2 = "rh2"
    AULUCK_PQ = "auluck-pq"
    INGHAM_GENERAL = "ingham-general"

    @classmethod
    def parse(cls, text):
        key = text.strip().lower().replace("_", "-")
        for f in cls:
            if f.value == key or f.name.lower().replace("_", "-") == key:
                return f
        raise DomainError(f"unknown formula {text!r}")


def round_half_up(x):
    """``floor(x + 1/2)`` as an int."""
    if not math.isfinite(x):
        raise DomainError(f"cannot round non-finite value {x}")
    return math.floor(x + 0.5)


@dataclass(frozen=True)
class Estimate:
    n: int
    value: float
    rounded: int
    formula: Formula


def _check_n(n, lo=1, hi=None, what="n"):
    if isinstance(n, bool) or not isinstance(n, int):
        raise DomainError(f"{what} must be an int, got {type(n).__name__}")
    if n < lo or (hi is not None and n > hi):
        rng = f"[{lo}, {hi}]" if hi is not None else f">= {lo}"
        raise DomainError(f"{what}={n} outside domain {rng}")


def _exp(x):
    if x > _LOG_MAX:
        raise DomainError("estimate exceeds double precision range")
    return math.exp(x)


def _growth(n):
    return _exp(EXP_RATE * math.sqrt(n))


def hr_p_asymptotic(n):
    """Hardy-Ramanujan leading term for p(n): exp(pi sqrt(2n/3)) / (4 sqrt(3) n)."""
    _check_n(n)
    return _growth(n) / (4.0 * SQRT3 * n)


def ig(n):
    """Leading asymptotic for h(n): pi exp(pi sqrt(2n/3)) / (12 sqrt(2 n^3))."""
    _check_n(n)
    return math.pi * _growth(n) / (12.0 * math.sqrt(2.0 * n ** 3))


def ingham_general(a, b, n):
    """Leading asymptotic for partitions of n into parts from {b, a+b, 2a+b, ...}.

    ``a = 1, b = 1`` gives the Hardy-Ramanujan term for p(n); ``a = 1, b = 2``
    gives :func:`ig`.
    """
    if not a > 0 or not b > 0:
        raise DomainError(f"need a > 0 and b > 0, got a={a}, b={b}")
    _check_n(n)
    r = b / a
    log_val = (
        math.lgamma(r)
        + (r - 1.0) * math.log(math.pi)
        + (-1.5 - r / 2.0) * math.log(2.0)
        - (r / 2.0) * math.log(3.0)
        + (-0.5 + r / 2.0) * math.log(a)
        - ((a + b) / (2.0 * a)) * math.log(n)
        + math.pi * math.sqrt(2.0 * n / (3.0 * a))
    )
    return _exp(log_val)


def _c1_shift(n):
    a1, b1, c1 = K.A1, K.B1, K.C1
    return a1 / math.sqrt(n + c1) + b1


def iga(n):
    """Exponent-corrected estimate: ig with n replaced by n + a1/sqrt(n + c1) + b1 in the exponent.

    Valid for n >= 4 only (c1 < -3 makes sqrt(n + c1) imaginary below that).
    """
    _check_n(n, 4)
    shifted = n + _c1_shift(n)
    return math.pi * _exp(EXP_RATE * math.sqrt(shifted)) / (12.0 * math.sqrt(2.0 * n ** 3))


def c4(n):
    a4, b4, c4_, d4 = K.C4
    return a4 * n ** 1.5 + b4 * n + c4_ * math.sqrt(n) + d4


def ig1(n):
    _check_n(n)
    return math.pi * _growth(n) / (12.0 * SQRT2 * c4(n))


def c5(n, coeffs=None):
    b5, c5_, d5 = coeffs if coeffs is not None else K.C5
    return b5 * n + c5_ * math.sqrt(n) + d5


def ig2(n):
    _check_n(n)
    return math.pi * _growth(n) / (12.0 * SQRT2 * (n ** 1.5 + c5(n)))


def ig2_linear(n):
    """ig2 with the straight-line fit of the denominator correction."""
    _check_n(n)
    slope, intercept = K.C5_LINEAR
    return math.pi * _growth(n) / (12.0 * SQRT2 * (n ** 1.5 + slope * n + intercept))


def c8(n):
    alpha, beta, gamma = K.C8_ODD if n % 2 else K.C8_EVEN
    return alpha * n + beta * math.sqrt(n) + gamma


def ig0(n):
    """Small-n estimate with a parity-split denominator correction, 3 <= n <= 100."""
    _check_n(n, 3, 100)
    return math.pi * _growth(n) / (12.0 * SQRT2 * (n ** 1.5 + c8(n)))


def c7a(n):
    p1, p2, p3, p4, p5 = K.C7A
    return p1 / n ** 0.5 + p2 / n + p3 / n ** 1.5 + p4 / n ** 2 + p5


def c7b(n):
    p1, p2, p3, p4 = K.C7B
    return p1 / n ** 0.5 + p2 / n + p3 / n ** 1.5 + p4


def _ig_minus(n, c7):
    correction = math.pi ** 2 * _growth(n) / (24.0 * SQRT3 * n ** 2 * c7)
    return ig(n) - correction


def f7a(n):
    _check_n(n)
    return _ig_minus(n, c7a(n))


def f7b(n):
    _check_n(n)
    return _ig_minus(n, c7b(n))


def c2prime(n):
    # The odd branch also covers n = 1, 2: the even branch needs n >= 2.01699.
    if n % 2 == 1 or n < 3:
        alpha, beta, gamma = K.C2PRIME_ODD
    else:
        alpha, beta, gamma = K.C2PRIME_EVEN
    return alpha * math.sqrt(n + beta) + gamma


def r_h0(n):
    """Rounded p(n) estimate for 1 <= n <= 100."""
    _check_n(n, 1, 100)
    return round_half_up(_growth(n) / (4.0 * SQRT3 * (n + c2prime(n))))


def r_h2(n):
    """Rounded p(n) estimate for n >= 80."""
    _check_n(n, 80)
    a2, b2, c2 = K.A2, K.B2, K.C2
    return round_half_up(_growth(n) / (4.0 * SQRT3 * (n + a2 * math.sqrt(n + c2) + b2)))


def h1_composite(n):
    """h(n) as a difference of consecutive rounded p estimates."""
    _check_n(n, 2)
    if n <= 80:
        return r_h0(n) - r_h0(n - 1)
    return r_h2(n) - r_h2(n - 1)


def auluck_pq(q, n):
    """Auluck's estimate binom(n-1, q-1) / q! of P_q(n)."""
    _check_n(q, 1, what="q")
    _check_n(n, q)
    return math.comb(n - 1, q - 1) / math.factorial(q)


_REAL = {
    Formula.HR: hr_p_asymptotic,
    Formula.IG: ig,
    Formula.IGA: iga,
    Formula.IG1: ig1,
    Formula.IG2: ig2,
    Formula.IG2_LINEAR: ig2_linear,
    Formula.IG0: ig0,
    Formula.F7A: f7a,
    Formula.F7B: f7b,
}
_ROUNDED = {
    Formula.IG_ROUND: ig,
    Formula.IGA_ROUND: iga,
    Formula.IG1_ROUND: ig1,
    Formula.IG2_ROUND: ig2,
    Formula.IG0_ROUND: ig0,
}
_INTEGER = {
    Formula.H1: h1_composite,
    Formula.RH0: r_h0,
    Formula.RH2: r_h2,
}

# Formulas estimating p(n) rather than h(n).
P_TARGETS = frozenset({Formula.HR, Formula.RH0, Formula.RH2})


def estimate(formula, n, *, a=1.0, b=2.0, q=None):
    """Evaluate ``formula`` at ``n`` and package it as an :class:`Estimate`.

    Rounded variants carry the rounded integer as their ``value``.
    """
    formula = Formula(formula)
    if formula in _REAL:
        value = _REAL[formula](n)
    elif formula in _ROUNDED:
        value = float(round_half_up(_ROUNDED[formula](n)))
    elif formula in _INTEGER:
        value = float(_INTEGER[formula](n))
    elif formula is Formula.INGHAM_GENERAL:
        value = ingham_general(a, b, n)
    elif formula is Formula.AULUCK_PQ:
        if q is None:
            raise DomainError("auluck-pq needs q")
        value = auluck_pq(q, n)
    else:  # pragma: no cover
        raise DomainError(f"unhandled formula {formula}")
    return Estimate(n, value, round_half_up(value), formula)


def domain(formula):
    """Smallest and largest n accepted (``None`` for no upper limit)."""
    formula = Formula(formula)
    return {
        Formula.IGA: (4, None),
        Formula.IGA_ROUND: (4, None),
        Formula.IG0: (3, 100),
        Formula.IG0_ROUND: (3, 100),
        Formula.RH0: (1, 100),
        Formula.RH2: (80, None),
        Formula.H1: (2, None),
    }.get(formula, (1, None))
