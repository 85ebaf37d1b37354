"""Tests for the brute-force posterior oracle.

The point of this module is independence: posterior confidence is
evaluated from the defining ratio of integrals, and the minimum over
feasible priors is found by search, never by the engine's candidate
rule.  Agreement between the two routes is the core assertion.
"""

import math

import numpy as np
import pytest

from avreliability.baselines import BetaPrior, beta_posterior_confidence
from avreliability.cbi import (
    Observation,
    PriorConstraints,
    worst_case_posterior_confidence,
    worst_case_prior,
)
from avreliability.errors import InvalidConstraints, NormalizationFailure
from avreliability.oracle import (
    ContinuousPriorSpec,
    DiscretePrior,
    minimize_over_feasible_priors,
    posterior_confidence,
)

SMALL_CS = PriorConstraints(epsilon=0.1, theta=0.5, p_l=0.01)


class TestDiscreteEvaluation:
    def test_two_point_prior_reproduces_engine_value(self):
        obs = Observation(2, 10)
        engine = worst_case_posterior_confidence(SMALL_CS, obs, 0.3)
        wp = worst_case_prior(SMALL_CS, obs, 0.3)
        # The upper mass point sits an epsilon above the claim: the engine's
        # bound is the infimum over priors with mass strictly above p.
        prior = DiscretePrior(
            support=(wp.x1, wp.x3 * (1 + 1e-12)), masses=(SMALL_CS.theta, 1 - SMALL_CS.theta)
        )
        assert posterior_confidence(prior, obs, 0.3) == pytest.approx(engine, abs=1e-9)

    def test_point_mass_at_claim_is_certain(self):
        prior = DiscretePrior(support=(0.3,), masses=(1.0,))
        for k, n in [(0, 5), (3, 17), (10, 10)]:
            assert posterior_confidence(prior, Observation(k, n), 0.3) == 1.0

    def test_mass_normalisation_enforced(self):
        with pytest.raises(InvalidConstraints):
            DiscretePrior(support=(0.1, 0.5), masses=(0.5, 0.6))

    def test_feasibility_check(self):
        good = DiscretePrior(support=(0.05, 0.4), masses=(0.5, 0.5))
        assert good.is_feasible(SMALL_CS)
        wrong_mass = DiscretePrior(support=(0.05, 0.4), masses=(0.6, 0.4))
        assert not wrong_mass.is_feasible(SMALL_CS)
        below_floor = DiscretePrior(support=(0.001, 0.4), masses=(0.5, 0.5))
        assert not below_floor.is_feasible(SMALL_CS)

    def test_underflowed_prior_raises(self):
        prior = DiscretePrior(support=(1.0,), masses=(1.0,))
        with pytest.raises(NormalizationFailure):
            posterior_confidence(prior, Observation(0, 10), 0.3)


class TestContinuousEvaluation:
    @pytest.mark.parametrize("n,p", [(10, 0.3), (1000, 1e-3), (1e6, 1e-6), (1e8, 1.09e-8)])
    def test_flat_prior_matches_closed_form(self, n, p):
        prior = ContinuousPriorSpec("beta-shaped", (1.0, 1.0))
        got = posterior_confidence(prior, Observation(0, n), p)
        want = -math.expm1((n + 1) * math.log1p(-p))
        assert got == pytest.approx(want, rel=1e-9)

    def test_beta_prior_matches_conjugate_route(self):
        # Quadrature versus the incomplete-beta evaluation: two
        # independent implementations of the same posterior.
        for a, b, k, n, p in [
            (0.5, 0.5, 1, 9.48e8, 4.12e-9),
            (2.0, 3.0, 4, 50, 0.2),
            (1.0, 1.0, 0, 200, 0.05),
        ]:
            spec = ContinuousPriorSpec("beta-shaped", (a, b))
            got = posterior_confidence(spec, Observation(k, n), p)
            want = beta_posterior_confidence(BetaPrior(a, b), Observation(k, n), p)
            assert got == pytest.approx(want, rel=1e-7)

    def test_uniform_interval_prior(self):
        spec = ContinuousPriorSpec("uniform-on-interval", (0.0, 1.0))
        got = posterior_confidence(spec, Observation(0, 10), 0.3)
        assert got == pytest.approx(1 - 0.7**11, rel=1e-9)
        narrow = ContinuousPriorSpec("uniform-on-interval", (0.4, 0.6))
        assert posterior_confidence(narrow, Observation(0, 10), 0.3) == 0.0

    def test_point_mixture_family(self):
        spec = ContinuousPriorSpec("point-mixture", (0.05, 0.5, 0.4, 0.5))
        direct = DiscretePrior(support=(0.05, 0.4), masses=(0.5, 0.5))
        obs = Observation(1, 20)
        assert posterior_confidence(spec, obs, 0.1) == pytest.approx(
            posterior_confidence(direct, obs, 0.1), rel=1e-12
        )

    def test_family_validation(self):
        with pytest.raises(InvalidConstraints):
            ContinuousPriorSpec("gaussian", (0.0, 1.0))
        with pytest.raises(InvalidConstraints):
            ContinuousPriorSpec("beta-shaped", (-1.0, 2.0))
        with pytest.raises(InvalidConstraints):
            ContinuousPriorSpec("uniform-on-interval", (0.7, 0.2))


class TestMinimisation:
    def test_small_scale_agreement_with_engine(self):
        obs = Observation(2, 10)
        engine = worst_case_posterior_confidence(SMALL_CS, obs, 0.3)
        minimum, prior = minimize_over_feasible_priors(SMALL_CS, obs, 0.3, grid_size=2000)
        assert minimum == pytest.approx(engine, abs=1e-6)
        assert minimum >= engine - 1e-6
        assert prior.support[0] == pytest.approx(0.01, rel=1e-9)
        assert prior.support[1] == pytest.approx(0.3, rel=1e-6)

    def test_minimiser_is_feasible(self):
        _, prior = minimize_over_feasible_priors(SMALL_CS, Observation(2, 10), 0.3, grid_size=500)
        assert prior.is_feasible(SMALL_CS)

    def test_claim_below_goal_reaches_zero(self):
        minimum, prior = minimize_over_feasible_priors(
            SMALL_CS, Observation(2, 10), 0.05, grid_size=500
        )
        assert minimum == 0.0
        # Attained by parking the lower mass above the claim, inside the goal.
        assert 0.05 < prior.support[0] <= SMALL_CS.epsilon

    def test_certain_prior_gives_one(self):
        cs = PriorConstraints(epsilon=0.1, theta=1.0, p_l=0.01)
        minimum, _ = minimize_over_feasible_priors(cs, Observation(2, 10), 0.3, grid_size=500)
        assert minimum == 1.0

    def test_grid_refinement_tightens_downward(self):
        obs = Observation(3, 40)
        values = [
            minimize_over_feasible_priors(SMALL_CS, obs, 0.35, grid_size=g, n_random=0)[0]
            for g in (50, 200, 1000, 4000)
        ]
        for coarse, fine in zip(values, values[1:]):
            assert fine <= coarse + 1e-15
        engine = worst_case_posterior_confidence(SMALL_CS, obs, 0.35)
        assert values[-1] >= engine - 1e-9

    def test_random_mixtures_never_undercut_the_bound(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            p_l = 10 ** rng.uniform(-8, -3)
            eps = p_l * 10 ** rng.uniform(0.3, 2.5)
            theta = rng.uniform(0.05, 0.95)
            k = int(rng.integers(0, 15))
            n = float(rng.uniform(k, 150)) if k else float(rng.uniform(0, 150))
            p = min(1.0, eps * 10 ** rng.uniform(0.01, 3))
            cs = PriorConstraints(epsilon=eps, theta=theta, p_l=p_l)
            obs = Observation(k, n)
            engine = worst_case_posterior_confidence(cs, obs, p)
            minimum, _ = minimize_over_feasible_priors(
                cs, obs, p, grid_size=800, n_random=500, seed=int(rng.integers(1 << 30))
            )
            assert minimum >= engine - 1e-6

    def test_minimum_grid_size_enforced(self):
        with pytest.raises(InvalidConstraints):
            minimize_over_feasible_priors(SMALL_CS, Observation(1, 5), 0.3, grid_size=2)

    def test_seeded_search_is_deterministic(self):
        obs = Observation(2, 10)
        a = minimize_over_feasible_priors(SMALL_CS, obs, 0.3, grid_size=300, seed=7)
        b = minimize_over_feasible_priors(SMALL_CS, obs, 0.3, grid_size=300, seed=7)
        assert a[0] == b[0]
        assert a[1] == b[1]
