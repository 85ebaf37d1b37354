"""Tests for the classical and conjugate-Bayes comparison methods."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from avreliability.baselines import (
    BetaPrior,
    beta_posterior_confidence,
    beta_required_miles,
    classical_failure_free_miles,
    jeffreys_prior,
    rand_power_miles,
    uniform_prior,
)
from avreliability.cbi import Observation, ReliabilityClaim
from avreliability.errors import InvalidConstraints


class TestClassical:
    def test_human_parity_reference(self):
        n = classical_failure_free_miles(ReliabilityClaim(1.09e-8, 0.95))
        assert n == pytest.approx(2.75e8, rel=0.01)

    def test_coin_flip_example(self):
        assert classical_failure_free_miles(ReliabilityClaim(0.5, 0.75)) == pytest.approx(2.0)

    def test_relaxed_claim(self):
        n = classical_failure_free_miles(ReliabilityClaim(1e-3, 0.95))
        assert n == pytest.approx(2994.2, abs=0.5)

    def test_claim_of_certainty_rejected(self):
        with pytest.raises(InvalidConstraints):
            classical_failure_free_miles(ReliabilityClaim(1.0, 0.95))


class TestPowerCalculation:
    def test_twenty_percent_margin_reference(self):
        n = rand_power_miles(8.72e-9, 1.09e-8, 0.95)
        assert n == pytest.approx(4.97e9, rel=0.005)

    def test_inverse_square_in_margin(self):
        base = rand_power_miles(1e-4, 1.25e-4, 0.95)
        widened = rand_power_miles(1e-4, 1.5e-4, 0.95)
        assert base / widened == pytest.approx(4.0, rel=1e-9)

    def test_derived_value(self):
        assert rand_power_miles(1e-4, 1.25e-4, 0.95) == pytest.approx(4.33e5, rel=0.01)

    def test_ordering_enforced(self):
        with pytest.raises(InvalidConstraints):
            rand_power_miles(1.09e-8, 8.72e-9, 0.95)


class TestBetaPosterior:
    def test_flat_prior_closed_form(self):
        for n, p in [(0, 0.3), (10, 0.1), (1e6, 1e-6)]:
            got = beta_posterior_confidence(uniform_prior(), Observation(0, n), p)
            want = -math.expm1((n + 1) * math.log1p(-p))
            assert got == pytest.approx(want, rel=1e-9)

    def test_flat_prior_no_data_is_cdf(self):
        assert beta_posterior_confidence(uniform_prior(), Observation(0, 0), 0.3) == pytest.approx(
            0.3
        )

    def test_jeffreys_single_failure_reference(self):
        conf = beta_posterior_confidence(jeffreys_prior(), Observation(1, 9.48e8), 4.12e-9)
        assert conf == pytest.approx(0.95, abs=0.002)

    def test_poisson_limit_cross_validation(self):
        # Where the Gamma limit applies it must agree with the incomplete
        # beta evaluation to the limit's own accuracy.
        from scipy.special import gammainc

        for a, k, n, p in [(1.0, 0, 1e9, 1e-9), (0.5, 2, 1e10, 5e-11), (1.0, 43, 6.4e9, 8.72e-9)]:
            exact = beta_posterior_confidence(BetaPrior(a, a), Observation(k, n), p)
            limit = float(gammainc(a + k, (a + n - k) * p))
            assert limit == pytest.approx(exact, rel=1e-6)

    def test_prior_validation(self):
        with pytest.raises(InvalidConstraints):
            BetaPrior(0.0, 1.0)

    @pytest.mark.parametrize(
        "k,n,p",
        [(0, 1e15, 1e-15), (10000, 1e15, 1e-15), (100, 1e12, 1e-9), (0, 0, 0.5)],
    )
    def test_extreme_arguments_stay_in_range(self, k, n, p):
        for prior in (uniform_prior(), jeffreys_prior()):
            v = beta_posterior_confidence(prior, Observation(k, n), p)
            assert math.isfinite(v)
            assert 0.0 <= v <= 1.0

    @settings(max_examples=50, deadline=None)
    @given(
        n=st.floats(min_value=10.0, max_value=1e10),
        mult=st.floats(min_value=1.0, max_value=100.0),
        k=st.integers(min_value=0, max_value=9),
        p=st.floats(min_value=1e-9, max_value=0.5),
    )
    def test_monotonicities(self, n, mult, k, p):
        prior = uniform_prior()
        base = beta_posterior_confidence(prior, Observation(k, n), p)
        more_miles = beta_posterior_confidence(prior, Observation(k, n * mult), p)
        assert more_miles >= base - 1e-12
        more_failures = beta_posterior_confidence(prior, Observation(k + 1, max(n, k + 1)), p)
        if n >= k + 1:
            assert more_failures <= beta_posterior_confidence(
                prior, Observation(k, max(n, k + 1)), p
            ) + 1e-12
        bigger_claim = beta_posterior_confidence(prior, Observation(k, n), min(2 * p, 1.0))
        assert bigger_claim >= base - 1e-12


class TestBetaRequiredMiles:
    @pytest.mark.parametrize(
        "prior,k,p,target",
        [
            (BetaPrior(1.0, 1.0), 43, 8.72e-9, 6.40e9),
            (BetaPrior(0.5, 0.5), 43, 8.72e-9, 6.33e9),
            (BetaPrior(1.0, 1.0), 1, 4.12e-9, 1.15e9),
            (BetaPrior(0.5, 0.5), 1, 4.12e-9, 9.48e8),
        ],
    )
    def test_failure_table_references(self, prior, k, p, target):
        n = beta_required_miles(prior, k, ReliabilityClaim(p, 0.95))
        assert n == pytest.approx(target, rel=0.01)

    def test_conjugacy_identity_with_classical(self):
        """Flat-prior Bayes needs exactly one mile fewer than the classical bound.

        The Beta(1, 1) posterior tail after n clean miles is
        1 - (1-p)^(n+1), so its crossing sits one mile left of the
        classical (1-p)^n = 1-c crossing.
        """
        for p in (1.09e-8, 1e-5, 1e-3, 0.02, 0.3):
            for c in (0.5, 0.9, 0.95, 0.99):
                classical = classical_failure_free_miles(ReliabilityClaim(p, c))
                bayes = beta_required_miles(uniform_prior(), 0, ReliabilityClaim(p, c))
                assert bayes + 1.0 == pytest.approx(classical, rel=1e-8, abs=2e-8 * classical + 1e-6)
