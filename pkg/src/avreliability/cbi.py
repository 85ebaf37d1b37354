"""Worst-case Bayesian confidence bounds from road-testing evidence.

Given only partial prior knowledge about a per-mile failure probability --
a floor ``p_l`` the technology cannot beat, an engineering goal ``epsilon``
believed met with prior confidence ``theta`` -- the functions here compute
the posterior confidence in a claimed bound ``p`` under the *least
favourable* prior consistent with that knowledge, after observing ``k``
failures in ``n`` miles.

The minimising prior is always a two-point distribution: mass ``theta`` at
some ``x1`` in ``[p_l, epsilon]`` and mass ``1 - theta`` at some ``x3``
above ``epsilon``.  ``x1`` minimises the binomial kernel
``x^k (1-x)^(n-k)`` over the two interval endpoints, and ``x3`` maximises
it over ``(p, 1]``, which puts it at ``p`` unless the empirical rate
``k/n`` exceeds ``p``.  Everything else in this module -- mile
requirements, supportable claims, compensation after a failure -- is a
root-finding layer over that single confidence formula.

All computations run in log space: for miles counts in the billions the
kernel underflows linearly long before the interesting regime is reached.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq
from scipy.special import expit

from .config import REL_TOL
from .errors import ClaimBelowGoal, InvalidConstraints, NoClaimSupportable, Unsatisfiable
from .solvers import smallest_crossing

__all__ = [
    "PriorConstraints",
    "Observation",
    "ReliabilityClaim",
    "TwoPointPrior",
    "CompensationResult",
    "log_kernel",
    "worst_case_prior",
    "worst_case_posterior_confidence",
    "required_miles",
    "required_miles_closed_form",
    "supported_claim",
    "compensation_miles",
    "n_star",
    "p_star",
]

# Divergence threshold for the balance point: beyond this many miles the
# two candidate mass points are numerically indistinguishable.
N_STAR_DIVERGENT = 1e18

# Largest claim probed before declaring no claim supportable; the open
# interval at 1 matters because a claim of "at most certainty" is vacuous.
_P_MAX = 1.0 - 1e-12


@dataclass(frozen=True)
class PriorConstraints:
    """Partial prior knowledge: floor, goal, and confidence in the goal.

    ``epsilon`` is the per-mile failure probability the developer aimed
    for before road testing, ``theta`` the prior confidence that the goal
    was met, and ``p_l`` the best rate the vehicle technology could
    possibly achieve (hardware failures alone keep it positive).
    """

    epsilon: float
    theta: float
    p_l: float

    def __post_init__(self):
        if not (0.0 < self.p_l < self.epsilon <= 1.0):
            raise InvalidConstraints(
                f"need 0 < p_l < epsilon <= 1, got p_l={self.p_l}, epsilon={self.epsilon}"
            )
        if not (0.0 < self.theta <= 1.0):
            raise InvalidConstraints(f"need 0 < theta <= 1, got theta={self.theta}")


@dataclass(frozen=True)
class Observation:
    """Road-testing evidence: ``k`` failures seen in ``n`` driven miles.

    ``n`` is a nonnegative real, not an integer: mile requirements are
    solved as continuous equations and rounded only for presentation.
    """

    k: int
    n: float

    def __post_init__(self):
        if self.k < 0 or self.k != int(self.k):
            raise InvalidConstraints(f"failure count must be a nonnegative integer, got {self.k}")
        if self.n < 0 or not math.isfinite(self.n):
            raise InvalidConstraints(f"miles must be nonnegative and finite, got {self.n}")
        if self.n == 0 and self.k > 0:
            raise InvalidConstraints("cannot observe failures in zero miles")
        if self.n > 0 and self.k > self.n:
            raise InvalidConstraints(f"at most one failure per mile: k={self.k} > n={self.n}")

    @property
    def rate(self) -> float:
        """Empirical failure rate ``k/n``, defined as 0 for ``n = 0``."""
        return self.k / self.n if self.n > 0 else 0.0


@dataclass(frozen=True)
class ReliabilityClaim:
    """A claimed per-mile bound ``p`` to be shown with confidence ``c``."""

    p: float
    c: float

    def __post_init__(self):
        if not (0.0 < self.p <= 1.0):
            raise InvalidConstraints(f"claimed bound must be in (0, 1], got {self.p}")
        if not (0.0 < self.c < 1.0):
            raise InvalidConstraints(f"confidence must be in (0, 1), got {self.c}")


@dataclass(frozen=True)
class TwoPointPrior:
    """The least favourable prior: mass ``theta`` at x1, ``1-theta`` at x3."""

    x1: float
    x3: float
    theta: float


@dataclass(frozen=True)
class CompensationResult:
    """Outcome of the compensate-one-failure analysis.

    ``n1`` fatality-free miles supported the claim ``p_supported``; after
    one failure, ``n_tilde`` total miles restore it, i.e. ``n2`` extra
    fatality-free miles.
    """

    n1: float
    p_supported: float
    n_tilde: float
    n2: float

    def __post_init__(self):
        if not self.n2 > 0:
            raise InvalidConstraints(
                f"compensation must be positive, got n2={self.n2} (n_tilde={self.n_tilde}, n1={self.n1})"
            )


def log_kernel(x: float, k: int, n: float) -> float:
    """log of the binomial kernel ``x^k (1-x)^(n-k)``.

    Terms with a zero exponent are dropped rather than evaluated, so the
    conventions ``0^0 = 1`` at both endpoints hold and ``n = k`` with
    ``x = 1`` stays finite.
    """
    out = 0.0
    if k > 0:
        out += k * math.log(x) if x > 0.0 else -math.inf
    if n - k > 0:
        out += (n - k) * math.log1p(-x) if x < 1.0 else -math.inf
    return out


def worst_case_prior(
    constraints: PriorConstraints, obs: Observation, p: float
) -> TwoPointPrior:
    """Construct the two-point prior minimising posterior confidence in ``p``.

    ``x1`` is the kernel argmin over ``{p_l, epsilon}`` (ties resolve to
    ``epsilon``; both choices give identical confidence at a tie) and
    ``x3`` is ``p`` unless the empirical rate exceeds ``p``, in which case
    the kernel mode ``k/n`` takes over.

    Raises ``ClaimBelowGoal`` for ``p <= epsilon``: the confidence bound is
    identically zero there and no single worst case exists.
    """
    if p <= constraints.epsilon:
        raise ClaimBelowGoal(
            f"claim p={p} does not exceed the engineering goal epsilon={constraints.epsilon}"
        )
    if p > 1.0:
        raise InvalidConstraints(f"claimed bound must be in (0, 1], got {p}")
    x1 = _argmin_mass_point(constraints, obs)
    rate = obs.rate
    x3 = rate if rate > p else p
    return TwoPointPrior(x1=x1, x3=x3, theta=constraints.theta)


def _argmin_mass_point(constraints: PriorConstraints, obs: Observation) -> float:
    # Tie resolves to epsilon: at equality both endpoints give the same
    # confidence, which is exactly what defines the balance point n*.
    lo = log_kernel(constraints.p_l, obs.k, obs.n)
    hi = log_kernel(constraints.epsilon, obs.k, obs.n)
    return constraints.p_l if lo < hi else constraints.epsilon


def worst_case_posterior_confidence(
    constraints: PriorConstraints, obs: Observation, p: float
) -> float:
    """Smallest posterior probability of ``X <= p`` over all feasible priors.

    Returns 0 for ``p <= epsilon`` (no basis for trusting a bound better
    than the goal) and the prior confidence ``theta`` when there is no
    evidence at all.  Evaluated as ``1 / (1 + e^L)`` with the log odds

        ``L = logK(x3) - logK(x1) + log((1-theta)/theta)``

    which stays finite for miles counts up to 1e15 and rates down to 1e-15.
    """
    if p <= constraints.epsilon:
        return 0.0
    if constraints.theta == 1.0:
        return 1.0
    prior = worst_case_prior(constraints, obs, p)
    log_odds = (
        log_kernel(prior.x3, obs.k, obs.n)
        - log_kernel(prior.x1, obs.k, obs.n)
        + math.log((1.0 - constraints.theta) / constraints.theta)
    )
    return float(expit(-log_odds))


def required_miles(
    constraints: PriorConstraints, k: int, claim: ReliabilityClaim
) -> float:
    """Smallest ``n >= k`` whose worst-case confidence in the claim reaches ``c``.

    Solved by exponential bracketing followed by bisection on ``n``
    (relative tolerance 1e-9); ``required_miles_closed_form`` provides the
    independent per-case cross-check.  ``c <= theta`` with ``k = 0`` needs
    no evidence and returns 0.
    """
    if claim.p <= constraints.epsilon:
        raise ClaimBelowGoal(
            f"claim p={claim.p} does not exceed the engineering goal "
            f"epsilon={constraints.epsilon}"
        )

    def reaches(n: float) -> bool:
        return (
            worst_case_posterior_confidence(constraints, Observation(k, n), claim.p)
            >= claim.c
        )

    return smallest_crossing(reaches, float(k), rel_tol=REL_TOL)


def required_miles_closed_form(
    constraints: PriorConstraints, k: int, claim: ReliabilityClaim
) -> float:
    """Per-case closed form for the mile requirement, as a cross-check.

    For each candidate mass point ``x1`` the confidence-equals-c equation
    is linear in ``n`` once ``x3 = p`` is assumed:

        ``n = k + (k log(x1/p) + log(theta(1-c)/(c(1-theta)))) / log((1-p)/(1-x1))``

    A candidate is accepted only if its solution is case-consistent: the
    implied ``k/n`` must not exceed ``p``, and re-deriving the worst-case
    prior at the solved ``n`` must select the same ``x1``.  Raises
    ``Unsatisfiable`` if no candidate is consistent (does not occur for
    ``p > epsilon`` with ``k/n <= p`` solutions).
    """
    if claim.p <= constraints.epsilon:
        raise ClaimBelowGoal(
            f"claim p={claim.p} does not exceed the engineering goal "
            f"epsilon={constraints.epsilon}"
        )
    p, c, theta = claim.p, claim.c, constraints.theta
    if theta == 1.0:
        return float(k)
    log_prior_odds = math.log(theta * (1.0 - c) / (c * (1.0 - theta)))
    solutions = []
    for x1 in (constraints.p_l, constraints.epsilon):
        denom = math.log1p(-p) - math.log1p(-x1)
        n = k + (k * math.log(x1 / p) + log_prior_odds) / denom
        n = max(n, float(k))
        if n > 0 and k / n > p:
            continue
        if _argmin_mass_point(constraints, Observation(k, n)) != x1 and not math.isclose(
            log_kernel(constraints.p_l, k, n), log_kernel(constraints.epsilon, k, n)
        ):
            continue
        solutions.append(n)
    if not solutions:
        raise Unsatisfiable("no case-consistent closed-form solution")
    return min(solutions)


def supported_claim(
    constraints: PriorConstraints, obs: Observation, c: float
) -> float:
    """Smallest claim ``p`` the evidence supports at confidence ``c``.

    The worst-case confidence is non-decreasing in ``p`` on
    ``(epsilon, 1]``, so a bisection over that interval (relative
    tolerance 1e-9) finds the boundary.  Raises ``NoClaimSupportable``
    when even ``p`` just below 1 fails to reach ``c``.
    """
    if not (0.0 < c < 1.0):
        raise InvalidConstraints(f"confidence must be in (0, 1), got {c}")

    def conf(p: float) -> float:
        return worst_case_posterior_confidence(constraints, obs, p)

    if conf(_P_MAX) < c:
        raise NoClaimSupportable(
            f"confidence at p->1 is {conf(_P_MAX):.6g} < c={c} for k={obs.k}, n={obs.n}"
        )
    # Tolerance is relative to the claim's offset above epsilon: for large
    # exposures the supportable claim is epsilon plus a sliver, and
    # downstream consumers (the compensation analysis) need that sliver,
    # not p itself, to full relative precision.
    lo, hi = constraints.epsilon, _P_MAX
    while hi - lo > REL_TOL * (hi - constraints.epsilon):
        mid = 0.5 * (lo + hi)
        if conf(mid) >= c:
            hi = mid
        else:
            lo = mid
    return hi


def compensation_miles(
    constraints: PriorConstraints, n1: float, c: float
) -> CompensationResult:
    """Extra fatality-free miles needed to recover from one observed failure.

    Two-step composition: first find the claim ``p`` that ``n1``
    failure-free miles supported at confidence ``c``; then find the total
    miles that restore that same claim once a single failure is on the
    record.  The difference is the compensation requirement.

    Requires ``c > theta``: at ``c <= theta`` the prior alone already
    grants confidence ``c`` in every claim above the goal, the supported
    claim degenerates to the goal itself regardless of ``n1``, and the
    compensation question has no answer (the single-failure requirement
    collapses to ``1/epsilon`` total miles independent of the evidence).
    """
    if c <= constraints.theta:
        raise InvalidConstraints(
            f"compensation analysis needs c > theta; with c={c} <= theta="
            f"{constraints.theta} the claim-support step is vacuous"
        )
    p = supported_claim(constraints, Observation(0, n1), c)
    n_tilde = required_miles(constraints, 1, ReliabilityClaim(p, c))
    return CompensationResult(n1=n1, p_supported=p, n_tilde=n_tilde, n2=n_tilde - n1)


def n_star(constraints: PriorConstraints) -> float:
    """Miles at which the two candidate mass points become equally adverse.

    Solves ``epsilon (1-epsilon)^(n-1) = p_l (1-p_l)^(n-1)`` for ``n``.
    The equation is linear in ``n`` after taking logs, so the root is
    found directly from the log-space balance; it depends only on the
    constraint geometry, never on the confidence levels.  Returns ``inf``
    when the root exceeds 1e18, where the two points are numerically
    indistinguishable (``epsilon`` approaching ``p_l``).
    """
    eps, p_l = constraints.epsilon, constraints.p_l
    root = 1.0 + (math.log(p_l) - math.log(eps)) / (math.log1p(-eps) - math.log1p(-p_l))
    if root > N_STAR_DIVERGENT:
        return math.inf
    return root


def p_star(constraints: PriorConstraints, c: float) -> float:
    """Claim level at which the single-failure mile requirement equals ``n_star``.

    The root in ``p`` of ``required_miles(k=1, p) = n_star`` over
    ``(epsilon, 1)``.  By the definition of the balance point, both
    candidate ``x1`` substitutions must give the same root; agreement is
    asserted to 1e-6 relative.
    """
    if not (0.0 < c < 1.0):
        raise InvalidConstraints(f"confidence must be in (0, 1), got {c}")
    target = n_star(constraints)
    if math.isinf(target):
        raise Unsatisfiable("balance point diverges for these constraints")
    theta = constraints.theta
    if theta == 1.0:
        raise InvalidConstraints("p_star is undefined for theta = 1 (confidence is always 1)")
    log_prior_odds = math.log(theta * (1.0 - c) / (c * (1.0 - theta)))

    def miles_for(p: float, x1: float) -> float:
        denom = math.log1p(-p) - math.log1p(-x1)
        return 1.0 + (math.log(x1 / p) + log_prior_odds) / denom

    # Just inside the open interval: at epsilon itself the equation
    # degenerates, and the root sits a few percent above it.  The root can
    # be epsilon plus a sliver, so the absolute tolerance must be far below
    # epsilon, not merely below the root.
    lo = constraints.epsilon * (1.0 + 1e-12)
    roots = [
        brentq(
            lambda p: miles_for(p, x1) - target,
            lo,
            _P_MAX,
            rtol=1e-14,
            xtol=constraints.epsilon * 1e-13,
        )
        for x1 in (constraints.p_l, constraints.epsilon)
    ]
    if abs(roots[0] - roots[1]) > 1e-6 * roots[1]:
        raise Unsatisfiable(
            f"mass-point substitutions disagree: {roots[0]:.12g} vs {roots[1]:.12g}"
        )
    return roots[1]
