"""One-step-ahead predictive distributions over miles to the next event.

Predictives from finite-fault models can be *defective*: their total mass
never reaches 1 because the model puts positive probability on "no
further failure".  The median is then defined only when at least half the
mass is reachable.
"""

from __future__ import annotations

import math
from typing import Callable

from scipy.optimize import brentq

from .errors import NoFiniteMedian

__all__ = ["PredictiveDistribution"]

_MEDIAN_CAP = 1e300


class PredictiveDistribution:
    """CDF/density pair over nonnegative miles, with a lazily solved median.

    ``cdf`` must be nondecreasing with ``cdf(0) = 0`` and limit
    ``mass_limit <= 1``; ``log_density`` is its log-derivative where the
    density is positive.  ``scale_hint`` seeds the median bracketing.
    """

    def __init__(
        self,
        cdf: Callable[[float], float],
        log_density: Callable[[float], float],
        mass_limit: float = 1.0,
        scale_hint: float = 1.0,
    ):
        self._cdf = cdf
        self._log_density = log_density
        self.mass_limit = float(mass_limit)
        self.scale_hint = max(float(scale_hint), 1e-300)
        self._median = None

    def cdf(self, x: float) -> float:
        if x <= 0:
            return 0.0
        return float(self._cdf(x))

    def log_density(self, x: float) -> float:
        if x <= 0:
            return -math.inf
        return float(self._log_density(x))

    def density(self, x: float) -> float:
        return math.exp(self.log_density(x))

    @property
    def median(self) -> float:
        """Miles at which the CDF crosses one half, solved by bisection.

        Raises ``NoFiniteMedian`` when the defective limit is below 0.5
        (or when the crossing lies beyond any representable exposure).
        """
        if self._median is None:
            if self.mass_limit < 0.5:
                raise NoFiniteMedian(
                    f"predictive mass limit {self.mass_limit:.4g} is below one half"
                )
            hi = self.scale_hint
            if self.cdf(hi) < 0.5:
                while self.cdf(hi) < 0.5:
                    hi *= 2.0
                    if hi > _MEDIAN_CAP:
                        raise NoFiniteMedian("median crossing beyond representable miles")
                lo = hi / 2.0
            else:
                lo = hi / 2.0
                while lo > 1e-300 and self.cdf(lo) >= 0.5:
                    lo /= 2.0
                if self.cdf(lo) >= 0.5:
                    lo = 0.0
            self._median = float(
                brentq(lambda x: self.cdf(x) - 0.5, lo, hi, rtol=1e-14, maxiter=300)
            )
        return self._median
