"""Published fitted constants for the h(n) estimators.

Values are kept at their printed precision.  ``source`` names the formula the
constant belongs to; ``key`` is what the fitting code and CLI use.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType


@dataclass(frozen=True)
class Entry:
    key: str
    values: tuple
    source: str
    names: tuple


_ENTRIES = (
    # Imported p(n) estimators used by the h1 composite.
    Entry("r_h2", (0.4432884566, 0.1325096085, 0.274078),
          "R'_h2: n + a2*sqrt(n + c2) + b2", ("a2", "b2", "c2")),
    Entry("c2prime_odd", (0.4527092482, 4.35278, -0.05498719946),
          "C2'(n), odd n: alpha*sqrt(n + beta) + gamma", ("alpha", "beta", "gamma")),
    Entry("c2prime_even", (0.4412187317, -2.01699, 0.2102618735),
          "C2'(n), even n: alpha*sqrt(n + beta) + gamma", ("alpha", "beta", "gamma")),
    # Exponent correction a1/sqrt(n + c1) + b1.
    Entry("c1_exponent", (0.5097429624, -1.453552800, -3.259480684),
          "I_ga exponent shift a1/sqrt(n + c1) + b1", ("a1", "b1", "c1")),
    Entry("c4", (1.000010809, 1.862505234, 1.169930087, -0.7005460222),
          "I_g1 denominator a4 n^1.5 + b4 n + c4 n^0.5 + d4", ("a4", "b4", "c4", "d4")),
    Entry("c5", (1.864260743, 1.084436400, 0.4754177757),
          "I_g2 denominator n^1.5 + b5 n + c5 n^0.5 + d5", ("b5", "c5", "d5")),
    Entry("c5_linear", (1.873818457, 27.08318017),
          "linear alternative to C5: slope n + intercept", ("slope", "intercept")),
    Entry("c7a", (0.8782296151, 0.2567016063, -3.580442785, 21.28305831, 0.6879945549),
          "F_7a correction: p1/n^.5 + p2/n + p3/n^1.5 + p4/n^2 + p5",
          ("p1", "p2", "p3", "p4", "p5")),
    Entry("c7b", (0.8861039149, -0.05719053203, 0.9843423289, 0.6879343652),
          "F_7b correction: p1/n^.5 + p2/n + p3/n^1.5 + p4", ("p1", "p2", "p3", "p4")),
    Entry("c8_odd", (1.942141112, -0.4796781366, 8.291226268),
          "I_g0 denominator piece, odd n: alpha n + beta sqrt(n) + gamma",
          ("alpha", "beta", "gamma")),
    Entry("c8_even", (1.803056782, 2.356539877, -6.043824511),
          "I_g0 denominator piece, even n: alpha n + beta sqrt(n) + gamma",
          ("alpha", "beta", "gamma")),
)

REGISTRY = MappingProxyType({e.key: e for e in _ENTRIES})


def get(key):
    return REGISTRY[key].values


A2, B2, C2 = get("r_h2")
C2PRIME_ODD = get("c2prime_odd")
C2PRIME_EVEN = get("c2prime_even")
A1, B1, C1 = get("c1_exponent")
C4 = get("c4")
C5 = get("c5")
C5_LINEAR = get("c5_linear")
C7A = get("c7a")
C7B = get("c7b")
C8_ODD = get("c8_odd")
C8_EVEN = get("c8_even")
