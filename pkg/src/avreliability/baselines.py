"""Comparison methods: classical bounds and conjugate-Bayes inference.

These are the yardsticks the worst-case analysis is measured against:

* the classical failure-free bound (how many clean miles make a rate
  ``>= p`` implausible at level ``1 - c``);
* the normal-approximation power calculation for demonstrations with an
  expected number of failures;
* conjugate Beta-prior updating (uniform and Jeffreys priors), whose
  posterior tail is a regularized incomplete beta function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import betainc, gammainc, ndtri

from .cbi import Observation, ReliabilityClaim
from .config import REL_TOL
from .errors import InvalidConstraints, ReliabilityError
from .solvers import smallest_crossing

__all__ = [
    "BetaPrior",
    "classical_failure_free_miles",
    "rand_power_miles",
    "beta_posterior_confidence",
    "beta_required_miles",
]


@dataclass(frozen=True)
class BetaPrior:
    """Beta(a, b) prior over the per-mile failure probability."""

    a: float
    b: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise InvalidConstraints(f"Beta prior needs a > 0 and b > 0, got ({self.a}, {self.b})")


def uniform_prior() -> BetaPrior:
    """The flat Beta(1, 1) prior."""
    return BetaPrior(1.0, 1.0)


def jeffreys_prior() -> BetaPrior:
    """The Jeffreys prior for the per-mile (Bernoulli) model, Beta(1/2, 1/2)."""
    return BetaPrior(0.5, 0.5)


def classical_failure_free_miles(claim: ReliabilityClaim) -> float:
    """Failure-free miles after which a rate of ``p`` or worse is rejected.

    ``n = log(1 - c) / log(1 - p)``: were the true rate at least ``p``,
    the chance of surviving ``n`` clean miles would be at most ``1 - c``.
    """
    if not (0.0 < claim.p < 1.0):
        raise InvalidConstraints(f"claimed bound must be in (0, 1) here, got {claim.p}")
    return math.log1p(-claim.c) / math.log1p(-claim.p)


def rand_power_miles(true_rate: float, bound: float, c: float) -> float:
    """Miles for a failure-counting demonstration that the rate is below ``bound``.

    Normal-approximation power calculation ``n = z^2 r / (bound - r)^2``
    with ``z`` the one-sided standard-normal quantile at ``c`` and ``r``
    the postulated true rate.  Used when failures are expected rather than
    absent; shrinking the margin by half quadruples the requirement.
    """
    if not (0.0 < true_rate < bound <= 1.0):
        raise InvalidConstraints(
            f"need 0 < true_rate < bound <= 1, got true_rate={true_rate}, bound={bound}"
        )
    if not (0.0 < c < 1.0):
        raise InvalidConstraints(f"confidence must be in (0, 1), got {c}")
    z = ndtri(c)
    return z * z * true_rate / (bound - true_rate) ** 2


def beta_posterior_confidence(prior: BetaPrior, obs: Observation, p: float) -> float:
    """Posterior probability of ``X <= p`` under a Beta prior.

    The Beta(a, b) prior updates to Beta(a + k, b + n - k), whose CDF at
    ``p`` is the regularized incomplete beta function ``I_p``.  The
    continued-fraction evaluation behind ``scipy.special.betainc`` holds
    to ~1e-10 relative across this package's ranges (shapes to ~1e2,
    exposures to ~1e15, claims down to 1e-15); a NaN from it is raised as
    an error, never passed through or clamped.
    """
    if not (0.0 <= p <= 1.0):
        raise InvalidConstraints(f"claimed bound must be in [0, 1], got {p}")
    v = float(betainc(prior.a + obs.k, prior.b + obs.n - obs.k, p))
    if math.isnan(v):
        # Extremely skewed shape pairs can defeat the continued fraction;
        # the Poisson/Gamma limit is exact in that regime (tiny p, huge n).
        if p <= 1e-6 and obs.n - obs.k >= 1e6:
            v = float(gammainc(prior.a + obs.k, (prior.b + obs.n - obs.k) * p))
        if math.isnan(v):
            raise ReliabilityError(
                f"incomplete beta evaluation failed at a={prior.a + obs.k}, "
                f"b={prior.b + obs.n - obs.k}, p={p}"
            )
    return v


def beta_required_miles(prior: BetaPrior, k: int, claim: ReliabilityClaim) -> float:
    """Smallest ``n >= k`` whose Beta-posterior confidence reaches ``c``.

    Same bracketing-plus-bisection scheme as the worst-case solver, with
    the same ``Unsatisfiable`` guard against runaway brackets.
    """

    def reaches(n: float) -> bool:
        return beta_posterior_confidence(prior, Observation(k, n), claim.p) >= claim.c

    return smallest_crossing(reaches, float(k), rel_tol=REL_TOL)
