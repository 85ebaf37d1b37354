"""Brute-force posterior evaluation over explicit priors.

The worst-case engine in :mod:`avreliability.cbi` rests on an argmin/argmax
rule for a two-point prior.  This module provides the independent check:
it evaluates the posterior confidence integral directly for *any* supplied
prior (discrete sums, or quadrature for continuous families) and
minimises it by exhaustive search over a grid of feasible two-point
priors plus randomised feasible mixtures.  Agreement between the two
routes is what the test suite asserts; nothing here reuses the engine's
candidate-selection logic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp
from numpy.polynomial.legendre import leggauss

from .cbi import Observation, PriorConstraints
from .config import DEFAULT_SEED
from .errors import InvalidConstraints, NormalizationFailure

__all__ = [
    "DiscretePrior",
    "ContinuousPriorSpec",
    "posterior_confidence",
    "minimize_over_feasible_priors",
]

_MASS_TOL = 1e-12


@dataclass(frozen=True)
class DiscretePrior:
    """A prior with finitely many support points and matching masses."""

    support: tuple
    masses: tuple

    def __post_init__(self):
        support = np.asarray(self.support, dtype=float)
        masses = np.asarray(self.masses, dtype=float)
        if support.shape != masses.shape or support.ndim != 1 or support.size == 0:
            raise InvalidConstraints("support and masses must be equal-length 1-d sequences")
        if np.any(masses < 0):
            raise InvalidConstraints("masses must be nonnegative")
        if abs(masses.sum() - 1.0) > 1e-9:
            raise InvalidConstraints(f"masses must sum to 1, got {masses.sum()}")
        if np.any(support < 0) or np.any(support > 1):
            raise InvalidConstraints("support points must lie in [0, 1]")

    def is_feasible(self, constraints: PriorConstraints, tol: float = _MASS_TOL) -> bool:
        """Whether this prior satisfies the partial-knowledge constraints.

        All mass must sit in ``[p_l, 1]`` and the mass at or below the
        engineering goal must equal ``theta``.
        """
        support = np.asarray(self.support, dtype=float)
        masses = np.asarray(self.masses, dtype=float)
        if np.any(support < constraints.p_l - tol):
            return False
        below = masses[support <= constraints.epsilon].sum()
        return abs(below - constraints.theta) <= tol


@dataclass(frozen=True)
class ContinuousPriorSpec:
    """A continuous prior named by family.

    Families:

    * ``"beta-shaped"`` -- density proportional to ``x^(a-1) (1-x)^(b-1)``
      on (0, 1); parameters ``(a, b)``.
    * ``"uniform-on-interval"`` -- constant density on ``(lo, hi)``;
      parameters ``(lo, hi)``.
    * ``"point-mixture"`` -- alternating ``(x, mass, x, mass, ...)``
      parameters; evaluates like a :class:`DiscretePrior`.
    """

    family: str
    parameters: tuple

    _FAMILIES = ("beta-shaped", "uniform-on-interval", "point-mixture")

    def __post_init__(self):
        if self.family not in self._FAMILIES:
            raise InvalidConstraints(f"unknown prior family {self.family!r}")
        p = self.parameters
        if self.family == "beta-shaped":
            if len(p) != 2 or p[0] <= 0 or p[1] <= 0:
                raise InvalidConstraints("beta-shaped needs positive (a, b)")
        elif self.family == "uniform-on-interval":
            if len(p) != 2 or not (0 <= p[0] < p[1] <= 1):
                raise InvalidConstraints("uniform-on-interval needs 0 <= lo < hi <= 1")
        else:
            if len(p) < 2 or len(p) % 2 != 0:
                raise InvalidConstraints("point-mixture needs (x, mass) pairs")

    def as_discrete(self) -> DiscretePrior:
        if self.family != "point-mixture":
            raise InvalidConstraints(f"{self.family} is not discrete")
        xs = self.parameters[0::2]
        ms = self.parameters[1::2]
        return DiscretePrior(support=tuple(xs), masses=tuple(ms))


def _log_kernel_array(x: np.ndarray, k: int, n: float) -> np.ndarray:
    """Vectorised log of ``x^k (1-x)^(n-k)`` with 0^0 = 1 endpoint handling."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    if k > 0:
        with np.errstate(divide="ignore"):
            out = out + k * np.log(x)
    if n - k > 0:
        with np.errstate(divide="ignore"):
            out = out + (n - k) * np.log1p(-x)
    return out


def posterior_confidence(prior, obs: Observation, p: float) -> float:
    """Posterior probability of ``X <= p`` under an explicit prior.

    The defining ratio of integrals

        ``Pr(X <= p | k, n) = int_0^p K dF / int_0^1 K dF``

    with ``K = x^k (1-x)^(n-k)`` is evaluated by exact log-space summation
    for discrete priors and by panelled Gauss-Legendre quadrature on the
    log-space integrand for continuous ones (relative error well below
    1e-8).  Raises ``NormalizationFailure`` if the denominator underflows
    to zero at working precision.
    """
    if isinstance(prior, ContinuousPriorSpec):
        if prior.family == "point-mixture":
            prior = prior.as_discrete()
        else:
            return _continuous_confidence(prior, obs, p)
    if not isinstance(prior, DiscretePrior):
        raise InvalidConstraints(f"unsupported prior type {type(prior).__name__}")

    support = np.asarray(prior.support, dtype=float)
    masses = np.asarray(prior.masses, dtype=float)
    keep = masses > 0
    support, masses = support[keep], masses[keep]
    logw = np.log(masses) + _log_kernel_array(support, obs.k, obs.n)
    log_den = logsumexp(logw)
    if not np.isfinite(log_den):
        raise NormalizationFailure("all prior mass has zero likelihood at working precision")
    below = support <= p
    if not below.any():
        return 0.0
    log_num = logsumexp(logw[below])
    return float(np.exp(log_num - log_den))


def _continuous_confidence(prior: ContinuousPriorSpec, obs: Observation, p: float) -> float:
    if prior.family == "beta-shaped":
        a, b = prior.parameters
        lo, hi = 0.0, 1.0

        def log_density(x):
            # Zero exponents are skipped, not multiplied: 0 * log(0) must
            # read as 0 here, exactly as in the kernel itself.
            out = np.zeros_like(np.asarray(x, dtype=float))
            if a != 1.0:
                out = out + (a - 1.0) * _safe_log(x)
            if b != 1.0:
                out = out + (b - 1.0) * _safe_log1m(x)
            return out

    else:
        lo, hi = prior.parameters

        def log_density(x):
            return np.zeros_like(np.asarray(x, dtype=float))

    def log_integrand(x):
        return _log_kernel_array(x, obs.k, obs.n) + log_density(x)

    log_den = _log_integral(log_integrand, lo, hi, obs)
    if not np.isfinite(log_den):
        raise NormalizationFailure("posterior normalizer underflowed to zero")
    if p <= lo:
        return 0.0
    log_num = _log_integral(log_integrand, lo, min(p, hi), obs)
    if not np.isfinite(log_num):
        return 0.0
    return float(np.exp(log_num - log_den))


def _safe_log(x):
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(x > 0, np.log(np.maximum(x, 1e-320)), -np.inf)


def _safe_log1m(x):
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(x < 1, np.log1p(-np.minimum(x, 1.0 - 1e-16)), -np.inf)


_GL_NODES, _GL_WEIGHTS = leggauss(48)


def _log_integral(log_f, lo: float, hi: float, obs: Observation) -> float:
    """log of ``int_lo^hi exp(log_f(x)) dx`` via panelled Gauss-Legendre.

    Panel edges are packed logarithmically toward both interval ends and
    around the kernel mode ``k/n``, where the integrand's mass
    concentrates for large exposures.
    """
    if hi <= lo:
        return -math.inf
    edges = {lo, hi}
    span = hi - lo
    # Geometric refinement toward each end of the interval.
    for frac in np.geomspace(1e-16, 0.5, 40):
        edges.add(lo + span * frac)
        edges.add(hi - span * frac)
    # Refinement around the kernel mode, scaled by its posterior width.
    if obs.n > 0:
        mode = obs.k / obs.n
        width = math.sqrt(max(mode * (1 - mode), 1e-12) / obs.n) + 1.0 / obs.n
        for mult in (-30, -10, -3, -1, 0, 1, 3, 10, 30):
            t = mode + mult * width
            if lo < t < hi:
                edges.add(t)
    edges = np.array(sorted(edges))
    a = edges[:-1]
    b = edges[1:]
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    # x has shape (panels, nodes); midpoint rounding can push nodes onto
    # the interval endpoints, so clip back into the open interval where
    # singular-but-integrable densities stay finite.
    x = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    x = np.clip(x, np.nextafter(lo, hi), np.nextafter(hi, lo))
    logf = log_f(x.ravel()).reshape(x.shape)
    with np.errstate(divide="ignore"):
        logw = np.log(half[:, None] * _GL_WEIGHTS[None, :])
    return float(logsumexp(logf + logw))


def _feasible_grid(
    constraints: PriorConstraints, obs: Observation, p: float, grid_size: int
) -> tuple[np.ndarray, np.ndarray]:
    """Log-spaced candidate points split at the engineering goal.

    Always contains the analytic candidates ``p_l``, ``epsilon``, ``p``,
    and ``k/n`` (when positive), since minimisers sit at interval
    endpoints or the kernel mode.  Mass placed exactly at the claim
    counts as satisfying it, so the candidate that approaches the
    worst-case bound is the one *just above* ``p``; both are included.
    """
    pts = set(np.geomspace(constraints.p_l, 1.0, grid_size))
    pts.update((constraints.p_l, constraints.epsilon, min(p, 1.0)))
    if p * (1.0 + 1e-9) <= 1.0:
        pts.add(p * (1.0 + 1e-9))
    rate = obs.rate
    if 0.0 < rate <= 1.0:
        pts.add(rate)
    grid = np.array(sorted(pts))
    below = grid[(grid >= constraints.p_l) & (grid <= constraints.epsilon)]
    above = grid[(grid > constraints.epsilon) & (grid <= 1.0)]
    return below, above


def minimize_over_feasible_priors(
    constraints: PriorConstraints,
    obs: Observation,
    p: float,
    grid_size: int = 2000,
    n_random: int = 1000,
    seed: int = DEFAULT_SEED,
) -> tuple[float, DiscretePrior]:
    """Smallest posterior confidence over discretised feasible priors.

    Exhausts every two-point prior with mass ``theta`` at a grid point at
    or below the goal and ``1 - theta`` at a grid point above it, then
    runs a randomised counterexample search over feasible mixtures with up
    to three support points per side.  Returns the minimum and the prior
    attaining it.
    """
    if grid_size < 3:
        raise InvalidConstraints("grid_size must be at least 3")
    theta = constraints.theta
    below, above = _feasible_grid(constraints, obs, p, grid_size)

    k, n = obs.k, obs.n
    log_below = _log_kernel_array(below, k, n)
    log_above = _log_kernel_array(above, k, n)

    # Posterior confidence for the pair (x1=below[i], x3=above[j]):
    # expit(-(logK3 - logK1 + log((1-theta)/theta))), except that mass
    # above p contributes nothing to the numerator; when even x1 exceeds p
    # (possible when p < epsilon) the confidence is exactly 0.
    best_conf = math.inf
    best_prior = None

    if theta == 1.0:
        # All feasible mass sits at or below epsilon.  If any candidate
        # point exceeds the claim, parking the mass there gives 0;
        # otherwise every feasible prior gives 1.
        x1 = float(below[-1])
        best_conf = 0.0 if x1 > p else 1.0
        best_prior = DiscretePrior(support=(x1,), masses=(1.0,))
    else:
        with np.errstate(over="ignore"):
            log_odds = (
                log_above[None, :]
                - log_below[:, None]
                + math.log((1.0 - theta) / theta)
            )
            conf = 1.0 / (1.0 + np.exp(log_odds))
        # Mass at x3 <= p joins the numerator and the ratio is exactly 1;
        # mass at x1 > p empties the numerator and the ratio is exactly 0.
        # (The two cannot co-occur: x1 <= epsilon < x3.)
        conf[:, above <= p] = 1.0
        conf[below > p, :] = 0.0

        i, j = np.unravel_index(np.argmin(conf), conf.shape)
        best_conf = float(conf[i, j])
        best_prior = DiscretePrior(
            support=(float(below[i]), float(above[j])), masses=(theta, 1.0 - theta)
        )

    if n_random > 0 and theta < 1.0:
        conf_r, prior_r = _random_mixture_search(
            constraints, obs, p, below, above, n_random, seed
        )
        if conf_r < best_conf:
            best_conf, best_prior = conf_r, prior_r

    return best_conf, best_prior


def _random_mixture_search(
    constraints: PriorConstraints,
    obs: Observation,
    p: float,
    below: np.ndarray,
    above: np.ndarray,
    n_random: int,
    seed: int,
) -> tuple[float, DiscretePrior]:
    """Randomised feasible mixtures: 3 support points per side, Dirichlet masses."""
    rng = np.random.default_rng(seed)
    theta = constraints.theta
    m = 3
    lo_pts = np.exp(
        rng.uniform(
            math.log(constraints.p_l), math.log(constraints.epsilon), size=(n_random, m)
        )
    )
    hi_pts = np.exp(rng.uniform(math.log(constraints.epsilon), 0.0, size=(n_random, m)))
    # Keep the upper points strictly above epsilon.
    hi_pts = np.maximum(hi_pts, np.nextafter(constraints.epsilon, 1.0))
    lo_mass = rng.dirichlet(np.ones(m), size=n_random) * theta
    hi_mass = rng.dirichlet(np.ones(m), size=n_random) * (1.0 - theta)

    support = np.concatenate([lo_pts, hi_pts], axis=1)
    masses = np.concatenate([lo_mass, hi_mass], axis=1)
    logw = np.log(masses) + _log_kernel_array(support, obs.k, obs.n)
    log_den = logsumexp(logw, axis=1)
    with np.errstate(invalid="ignore"):
        num_mask = support <= p
        logw_masked = np.where(num_mask, logw, -np.inf)
        log_num = logsumexp(logw_masked, axis=1)
    conf = np.exp(log_num - log_den)
    conf = np.where(np.isfinite(log_den), conf, np.inf)
    idx = int(np.argmin(conf))
    prior = DiscretePrior(support=tuple(support[idx]), masses=tuple(masses[idx]))
    return float(conf[idx]), prior
