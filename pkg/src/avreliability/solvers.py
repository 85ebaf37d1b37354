"""Bracketing and bisection helpers shared by the bound solvers.

Mile requirements are threshold problems -- find the smallest exposure at
which a monotone-beyond-the-bracket predicate flips to true -- rather than
sign-change problems, so these work on predicates and tolerate plateaus.
"""

from __future__ import annotations

from typing import Callable

from .errors import Unsatisfiable

# Exposure beyond which exponential bracketing gives up; confidence
# functions in this package are expit-shaped and long since saturated.
_BRACKET_CAP = 1e280


def smallest_crossing(
    reaches: Callable[[float], bool], n_min: float, rel_tol: float = 1e-9
) -> float:
    """Smallest ``n >= n_min`` with ``reaches(n)`` true.

    Exponential bracketing doubles an upper probe until the predicate
    holds, then bisection shrinks the bracket to ``rel_tol`` relative
    width.  Raises ``Unsatisfiable`` if no probe below the bracketing cap
    satisfies the predicate.
    """
    if reaches(n_min):
        return n_min
    hi = max(n_min, 1.0)
    while not reaches(hi):
        hi *= 2.0
        if hi > _BRACKET_CAP:
            raise Unsatisfiable(
                f"predicate still false at n={hi:.3g}; no finite exposure suffices"
            )
    lo = max(n_min, hi / 2.0)
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if reaches(mid):
            hi = mid
        else:
            lo = mid
    return hi
