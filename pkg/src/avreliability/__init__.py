"""Reliability assessment for autonomous-vehicle road testing.

Two halves:

* conservative confidence bounds on rare per-mile failure probabilities
  (``cbi``, ``oracle``, ``baselines``) -- how many miles support which
  claim, under worst-case, classical, or conjugate-Bayes reasoning;
* disengagement-trend forecasting (``disengagements``, ``srgm``,
  ``evaluation``) -- fitting reliability-growth models to inter-failure
  mile data, scoring their one-step-ahead predictions, and recalibrating
  them.
"""

from .baselines import (
    BetaPrior,
    beta_posterior_confidence,
    beta_required_miles,
    classical_failure_free_miles,
    rand_power_miles,
)
from .cbi import (
    CompensationResult,
    Observation,
    PriorConstraints,
    ReliabilityClaim,
    TwoPointPrior,
    compensation_miles,
    n_star,
    p_star,
    required_miles,
    required_miles_closed_form,
    supported_claim,
    worst_case_posterior_confidence,
    worst_case_prior,
)
from .disengagements import (
    FailureHistory,
    MonthlyRecord,
    expand_to_interfailure,
    parse_monthly_csv,
    waymo_fixture_path,
)
from .evaluation import (
    PredictionRecord,
    UPlot,
    plr,
    recalibrate,
    recalibrated_stream,
    recalibrated_u_values,
    u_plot,
)
from .oracle import (
    ContinuousPriorSpec,
    DiscretePrior,
    minimize_over_feasible_priors,
    posterior_confidence,
)
from .srgm import (
    FittedModel,
    PredictiveDistribution,
    SrgmKind,
    fit,
    predict_next,
    rolling_predictions,
    simulate_history,
)

__version__ = "0.1.0"
