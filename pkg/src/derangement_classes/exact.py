"""Exact counting of partitions, restricted partitions and derangements.

Notation used throughout the package:

* ``p(n)``   -- unrestricted partitions of ``n``.
* ``h(n)``   -- partitions of ``n`` whose parts are all >= 2.  This is the
  number of conjugacy classes of derangements of order ``n`` (a class is
  fixed by its cycle type, and a derangement has no 1-cycles).
* ``P_q(n)`` -- partitions of ``n`` into exactly ``q`` parts.
* ``H_q(n)`` -- partitions of ``n`` into exactly ``q`` parts, all >= 2.

All values are Python ints, so every result here is exact.  Tables are filled
iteratively, never by deep recursion.
"""

from __future__ import annotations

import math
import os
import threading
from dataclasses import dataclass
from fractions import Fraction
from operator import add

__all__ = [
    "DomainError",
    "PartitionTable",
    "QTable",
    "pentagonal_bounds",
    "p_exact",
    "h_exact_recursion",
    "h_exact_difference",
    "h_exact_sum_pq",
    "h_sum_pq_sequence",
    "pq_exact",
    "hq_exact",
    "oracle_count",
    "enumerate_partitions",
    "derangement_count",
    "derangement_count_inclusion_exclusion",
    "gf_coefficients",
    "progression_partition_counts",
    "partition_table",
    "ORACLE_BOUND_ENV",
    "DEFAULT_ORACLE_BOUND",
]

ORACLE_BOUND_ENV = "DERANGEMENT_CLASSES_ORACLE_BOUND"
DEFAULT_ORACLE_BOUND = 90
QTABLE_LIMIT = 1500


class DomainError(ValueError):
    """An argument lies outside the domain of the requested function."""


def _check_index(n, name="n", minimum=0):
    if isinstance(n, bool) or not isinstance(n, int):
        raise DomainError(f"{name} must be an int, got {type(n).__name__}")
    if n < minimum:
        raise DomainError(f"{name} must be >= {minimum}, got {n}")


def pentagonal_bounds(n):
    """Return ``(k1, k2)``, the number of pentagonal terms in the recurrence.

    ``k1`` is the largest ``k >= 0`` with ``(3k^2 + k)/2 <= n`` and ``k2`` the
    largest with ``(3k^2 - k)/2 <= n``.  Both come from the integer square
    root of ``24n + 1``; no floating point is involved.

    >>> pentagonal_bounds(1)
    (0, 1)
    >>> pentagonal_bounds(100)
    (8, 8)
    """
    _check_index(n)
    r = math.isqrt(24 * n + 1)
    return (r - 1) // 6, (r + 1) // 6


def _pentagonal_next(values, n, n0_value):
    """Value at index ``n`` of a sequence obeying Euler's pentagonal recurrence.

    ``values`` holds indices ``0..n-1``; indices below zero count as zero.
    """
    if n == 0:
        return n0_value
    k1, k2 = pentagonal_bounds(n)
    total = 0
    for k in range(1, k1 + 1):
        term = values[n - (3 * k * k + k) // 2]
        total += term if k & 1 else -term
    for k in range(1, k2 + 1):
        term = values[n - (3 * k * k - k) // 2]
        total += term if k & 1 else -term
    return total


@dataclass(frozen=True)
class PartitionTable:
    """Exact ``p`` and ``h`` values for ``0..max_n``.

    ``p`` is filled with the pentagonal recurrence for ``p``; ``h`` with the same
    recurrence seeded by ``h(0) = 1, h(1) = 0``.  The two sequences are computed
    independently of each other, so ``h[n] == p[n] - p[n-1]`` is a real check.
    """

    max_n: int
    p: tuple
    h: tuple

    @classmethod
    def build(cls, max_n, base=None):
        _check_index(max_n, "max_n")
        p = list(base.p) if base is not None else []
        h = list(base.h) if base is not None else []
        for n in range(len(p), max_n + 1):
            p.append(_pentagonal_next(p, n, 1))
        for n in range(len(h), max_n + 1):
            # h(1) = 0 is a seed, not a consequence of the recurrence.
            h.append(0 if n == 1 else _pentagonal_next(h, n, 1))
        return cls(max_n, tuple(p[: max_n + 1]), tuple(h[: max_n + 1]))

    def h_difference(self, n):
        return self.p[n] - (self.p[n - 1] if n >= 1 else 0)


_table_lock = threading.Lock()
_table = PartitionTable.build(0)


def partition_table(max_n):
    """Shared table covering at least ``0..max_n``; grows on demand, never shrinks."""
    global _table
    _check_index(max_n, "max_n")
    table = _table
    if table.max_n >= max_n:
        return table
    with _table_lock:
        if _table.max_n < max_n:
            # Grow geometrically so a rising sweep of queries costs O(final size).
            target = max(max_n, 2 * _table.max_n)
            _table = PartitionTable.build(target, base=_table)
        return _table


def p_exact(n):
    """``p(n)`` by the pentagonal recurrence with ``p(0) = 1``."""
    _check_index(n)
    return partition_table(n).p[n]


def h_exact_recursion(n):
    """``h(n)`` by the pentagonal recurrence with ``h(0) = 1``, ``h(1) = 0``."""
    _check_index(n)
    return partition_table(n).h[n]


def h_exact_difference(n):
    """``h(n) = p(n) - p(n-1)`` with ``p(-1) = 0``."""
    _check_index(n)
    return partition_table(n).h_difference(n)


class QTable:
    """Triangular table of ``P_q(n)`` for ``1 <= q <= n <= max_n``.

    Rows are filled with the classical recurrence

        P_q(n) = sum_{j=1}^{min(q, n-q)} P_j(n-q),    P_q(q) = 1,

    using running prefix sums over ``j`` so each entry costs O(1).  Storage is
    ``cols[n][q]`` with index 0 unused, about ``max_n^2 / 2`` ints in total.
    """

    def __init__(self, max_n):
        _check_index(max_n, "max_n")
        self.max_n = max_n
        # prefix[m][t] = sum_{j<=t} P_j(m) for 0 <= t <= m; prefix[0] = [1]
        # encodes the empty partition so that P_q(q) = 1 falls out.
        prefix = [[1]]
        cols = [[0]]
        for n in range(1, max_n + 1):
            col = [0] * (n + 1)
            for q in range(1, n + 1):
                m = n - q
                col[q] = prefix[m][min(q, m)]
            cols.append(col)
            run = [0] * (n + 1)
            acc = 0
            for q in range(1, n + 1):
                acc += col[q]
                run[q] = acc
            prefix.append(run)
        self._cols = cols

    def __getitem__(self, key):
        q, n = key
        return self._cols[n][q]

    def pq(self, q, n):
        if not 1 <= q <= n <= self.max_n:
            raise DomainError(f"need 1 <= q <= n <= {self.max_n}, got q={q}, n={n}")
        return self._cols[n][q]

    def row_sum(self, n):
        return sum(self._cols[n][1:])


_qtable_lock = threading.Lock()
_qtable = None


def _shared_qtable(max_n):
    global _qtable
    qt = _qtable
    if qt is not None and qt.max_n >= max_n:
        return qt
    with _qtable_lock:
        if _qtable is None or _qtable.max_n < max_n:
            size = max(max_n, 2 * _qtable.max_n if _qtable else 64)
            _qtable = QTable(size)
        return _qtable


def pq_exact(q, n):
    """``P_q(n)``: partitions of ``n`` into exactly ``q`` parts."""
    _check_index(q, "q")
    _check_index(n)
    if not 1 <= q <= n:
        raise DomainError(f"need 1 <= q <= n, got q={q}, n={n}")
    return _shared_qtable(n).pq(q, n)


def hq_exact(q, n):
    """``H_q(n)``: partitions of ``n`` into exactly ``q`` parts, each >= 2.

    Subtracting 1 from every part maps these onto partitions of ``n - q`` into
    exactly ``q`` parts, so ``H_q(n) = P_q(n - q)`` for ``q <= n // 2`` and 0
    otherwise.
    """
    _check_index(q, "q", 1)
    _check_index(n, "n", 2)
    if q > n // 2:
        return 0
    return pq_exact(q, n - q)


def h_sum_pq_sequence(max_n):
    """List of ``sum_{q=1}^{n//2} P_q(n-q)`` for ``n = 0..max_n``.

    Streams over ``q`` keeping one vector: ``at_most[m]`` counts partitions of
    ``m`` into at most ``q`` parts.  Updating it in place in ascending ``m`` is
    the prefix-sum form of the ``P_q`` recurrence, and the ``P_q(m)`` values it
    produces are accumulated into ``h[m + q]``.  Memory is O(max_n).

    Entries 0 and 1 are the conventions ``h(0) = 1``, ``h(1) = 0``.
    """
    _check_index(max_n, "max_n")
    N = max_n
    at_most = [1] + [0] * N
    h = [0] * (N + 1)
    h[0] = 1
    for q in range(1, N // 2 + 1):
        # Only m <= N - q is ever read (h index m + q <= N).
        hi = N - q
        lo = q
        while lo <= hi:
            top = min(lo + q, hi + 1)
            # P_q(m) = at_most[m - q] (already including row q) for m in [lo, top).
            pq_block = at_most[lo - q : top - q]
            at_most[lo:top] = map(add, at_most[lo:top], pq_block)
            # Only m >= q contributes, i.e. q <= (m + q) // 2.
            h[lo + q : top + q] = map(add, h[lo + q : top + q], pq_block)
            lo = top
        # The m = 0 .. q-1 range: P_q(m) = 0 there, nothing to add.
    return h


def h_exact_sum_pq(n):
    """``h(n) = sum_{q=1}^{n//2} P_q(n-q)`` for ``n >= 2``."""
    _check_index(n, "n", 2)
    if n > QTABLE_LIMIT:
        # The triangular table is quadratic in memory; stream instead.
        return h_sum_pq_sequence(n)[n]
    return sum(hq_exact(q, n) for q in range(1, n // 2 + 1))


def oracle_bound():
    raw = os.environ.get(ORACLE_BOUND_ENV)
    if raw is None:
        return DEFAULT_ORACLE_BOUND
    try:
        return int(raw)
    except ValueError:
        raise DomainError(f"{ORACLE_BOUND_ENV}={raw!r} is not an integer") from None


def enumerate_partitions(n, min_part=1):
    """Yield every partition of ``n`` with parts >= ``min_part``, parts non-decreasing.

    Iterative depth-first walk; meant for small ``n`` only.
    """
    _check_index(n)
    _check_index(min_part, "min_part", 1)
    if n == 0:
        yield ()
        return
    # Each stack entry: (parts so far, remaining, smallest allowed next part).
    stack = [((), n, min_part)]
    while stack:
        parts, rest, low = stack.pop()
        # Push in reverse so parts come out in lexicographic order.
        for part in range(rest, low - 1, -1):
            if part == rest:
                stack.append((parts + (part,), 0, part))
            elif rest - part >= part:
                stack.append((parts + (part,), rest - part, part))
        if rest == 0:
            yield parts


def oracle_count(n, min_part=1, bound=None):
    """Count partitions of ``n`` with all parts >= ``min_part`` by walking the tree.

    The partition tree branches on the next (non-decreasing) part; identical
    subtrees, keyed by ``(remaining, smallest allowed part)``, are counted once.
    Neither pentagonal numbers nor the ``P_q`` recurrence are involved.

    Refuses ``n`` above ``bound`` (default: environment override or 90).
    """
    _check_index(n)
    _check_index(min_part, "min_part", 1)
    if bound is None:
        bound = oracle_bound()
    if n > bound:
        raise DomainError(f"oracle refuses n={n} above enumeration bound {bound}")
    # leaves[r][k]: partitions of r with every part >= k; filled for r ascending.
    leaves = [[1] * (n + 2)]
    for r in range(1, n + 1):
        row = [0] * (n + 2)
        # Descend k so row[k] = row[k+1] + (subtree with first part exactly k).
        for k in range(r, 0, -1):
            first_part_k = 1 if k == r else (leaves[r - k][k] if r - k >= k else 0)
            row[k] = row[k + 1] + first_part_k
        leaves.append(row)
    if min_part > n:
        return 1 if n == 0 else 0
    return leaves[n][min_part]


def derangement_count(n):
    """Number of fixed-point-free permutations of ``n`` elements.

    ``D_1 = 0``, ``D_2 = 1``, ``D_n = (n-1)(D_{n-1} + D_{n-2})``.
    """
    _check_index(n, "n", 1)
    prev, cur = 1, 0  # D_0, D_1
    for k in range(2, n + 1):
        prev, cur = cur, (k - 1) * (cur + prev)
    return cur


def derangement_count_inclusion_exclusion(n):
    """``n! * sum_{i=0}^{n} (-1)^i / i!`` in exact rational arithmetic."""
    _check_index(n)
    total = Fraction(0)
    inv_fact = Fraction(1)
    for i in range(n + 1):
        if i:
            inv_fact /= i
        total += inv_fact if i % 2 == 0 else -inv_fact
    value = total * math.factorial(n)
    assert value.denominator == 1
    return int(value)


def gf_coefficients(max_n, smallest_factor=2):
    """Coefficients of ``prod_{i>=smallest_factor} 1/(1 - x^i)`` up to ``x^max_n``.

    Each factor is expanded as the truncated series ``1 + x^i + x^2i + ...`` and
    multiplied in as a full polynomial product, so this shares nothing with the
    recurrences above.
    """
    _check_index(max_n, "max_n")
    coeffs = [1] + [0] * max_n
    for i in range(smallest_factor, max_n + 1):
        factor = [0] * (max_n + 1)
        for e in range(0, max_n + 1, i):
            factor[e] = 1
        product = [0] * (max_n + 1)
        for a, ca in enumerate(coeffs):
            if ca:
                for b in range(0, max_n + 1 - a, i):
                    product[a + b] += ca * factor[b]
        coeffs = product
    return coeffs


def progression_partition_counts(max_n, step, first):
    """Counts for ``0..max_n`` of partitions into parts from ``first, first+step, ...``.

    Coin-change fill over the allowed parts; ``(1, 1)`` gives ``p`` and
    ``(1, 2)`` gives ``h``.
    """
    _check_index(max_n, "max_n")
    _check_index(step, "step", 1)
    _check_index(first, "first", 1)
    counts = [1] + [0] * max_n
    for part in range(first, max_n + 1, step):
        for m in range(part, max_n + 1):
            counts[m] += counts[m - part]
    return counts
