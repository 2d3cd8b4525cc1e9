"""Closed-form subgroup counts and query-bound reference curves.

All counting is exact big-integer arithmetic; the quotients in the two
counting formulas divide exactly at every step, and a nonzero remainder is
treated as an internal error (it would mean the formula was mistyped).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

from .algebra import DEFAULT_ENUMERATION_CAP, Subgroup, VectorP, enumerate_subgroups
from .errors import ParameterError


def _exact_product_quotient(factors: Iterable[tuple[int, int]]) -> int:
    """Product of num/den pairs where every partial product is an integer."""
    total = 1
    for num, den in factors:
        total, rem = divmod(total * num, den)
        if rem:
            raise ArithmeticError("count formula did not divide exactly")
    return total


def t1_count(p: int, n: int, k: int) -> int:
    """Number of distinct rank-k subgroups of Z_p^n (a Gaussian binomial)."""
    if not (0 <= k <= n):
        raise ParameterError(f"need 0 <= k <= n, got k={k}, n={n}")
    return _exact_product_quotient(
        (p ** (n - i) - 1, p ** (i + 1) - 1) for i in range(k)
    )


def t2_count(p: int, n: int, k: int) -> int:
    """Number of rank-k subgroups containing a fixed non-zero element."""
    if not (1 <= k <= n):
        raise ParameterError(f"need 1 <= k <= n, got k={k}, n={n}")
    return _exact_product_quotient(
        (p ** (n - 1 - i) - 1, p ** (i + 1) - 1) for i in range(k - 1)
    )


def evading_subgroup(
    p: int,
    n: int,
    d_set: Iterable[VectorP],
    k: int,
    d: int,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> Optional[Subgroup]:
    """Some rank-k subgroup meeting the given set in fewer than d points.

    Exhaustive scan; None only when no enumerated subgroup qualifies.  When
    |D| < d(p^n-1)/(p^k-1) a witness always exists by double counting.
    """
    elements = list(d_set)
    if any(v.is_zero() for v in elements):
        raise ParameterError("the scanned set must not contain 0^n")
    for h in enumerate_subgroups(p, n, k, cap):
        hits = sum(1 for v in elements if h.contains(v))
        if hits < d:
            return h
    return None


def det_query_bound(p: int, n: int, k: int, d: int) -> int:
    """Worst-case query count of the deterministic solver at split d."""
    return p ** (n - k - d) + (k + 1) * p**d


def optimal_d(p: int, n: int, k: int) -> int:
    """The d minimizing det_query_bound (smallest d on ties)."""
    return min(range(n - k + 1), key=lambda d: det_query_bound(p, n, k, d))


@dataclass(frozen=True)
class BoundReport:
    """Exact counts plus the three reference curves for one (p, n, k)."""

    p: int
    n: int
    k: int
    t1: int
    t2: int
    lower_adaptive: float
    lower_nonadaptive: float
    upper_det: int


def bound_report(p: int, n: int, k: int) -> BoundReport:
    if not (1 <= k < n):
        raise ParameterError(f"need 1 <= k < n, got k={k}, n={n}")
    return BoundReport(
        p=p,
        n=n,
        k=k,
        t1=t1_count(p, n, k),
        t2=t2_count(p, n, k),
        lower_adaptive=max(float(k), math.sqrt(p ** (n - k))),
        lower_nonadaptive=max(float(k), math.sqrt(k * p ** (n - k))),
        upper_det=min(det_query_bound(p, n, k, d) for d in range(n - k + 1)),
    )
