"""Reliability-growth models over inter-failure miles.

Five classic families, fit by maximum likelihood on a prefix of the
inter-failure record and queried for the distribution of miles to the
next event:

* ``GO``  -- exponential mean function ``m(t) = a (1 - e^(-b t))``
  (finite expected fault count ``a``);
* ``DU``  -- power-law mean function ``m(t) = alpha t^beta``;
* ``MO``  -- logarithmic mean function ``m(t) = ln(1 + lam0 th0 t) / th0``;
* ``LI``  -- ``N`` faults, each with a rate that decays with total
  exposure: conditional intensity ``(N - i + 1) alpha / (beta + t)``
  after ``i - 1`` removals;
* ``LV``  -- independent Pareto gaps with shape ``alpha`` and a scale
  ``psi(i) = beta1 + beta2 i`` that drifts linearly with the failure
  index.

The first three are nonhomogeneous Poisson processes in cumulative miles
``t``, with event-time log-likelihood ``sum ln lambda(t_i) - m(T)``; the
last two have closed-form per-gap densities.  These forms are the
canonical ones from the prediction-comparison literature.

Fitting transforms parameters to an unconstrained space and runs a
derivative-free simplex search from several start points (``DU`` has an
exact closed-form MLE and ``GO`` reduces to a one-dimensional profile).
None of this is a safety argument: growth models extrapolate a trend and
say nothing about the system version after the latest change.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .config import DEFAULT_MIN_FIT, DEFAULT_ROLLING_START
from .disengagements import FailureHistory
from .errors import FitDiverged, InsufficientHistory, NoFiniteMedian
from .evaluation import PredictionRecord
from .predictive import PredictiveDistribution

__all__ = [
    "SrgmKind",
    "FittedModel",
    "PredictiveDistribution",
    "RollingResult",
    "fit",
    "log_likelihood",
    "predict_next",
    "rolling_predictions",
    "simulate_history",
    "time_rescaling_distance",
]


class SrgmKind(str, enum.Enum):
    GO = "GO"
    DU = "DU"
    MO = "MO"
    LI = "LI"
    LV = "LV"


_PARAM_NAMES = {
    SrgmKind.GO: ("a", "b"),
    SrgmKind.DU: ("alpha", "beta"),
    SrgmKind.MO: ("lam0", "theta0"),
    SrgmKind.LI: ("N", "alpha", "beta"),
    SrgmKind.LV: ("alpha", "beta1", "beta2"),
}


@dataclass(frozen=True)
class FittedModel:
    """A family, its fitted parameters, and the evidence they came from."""

    kind: SrgmKind
    parameters: dict
    history_length: int
    log_likelihood: float
    end_time: float


@dataclass
class RollingResult:
    """One-step-ahead predictions over an expanding history prefix."""

    records: list = field(default_factory=list)
    predictives: list = field(default_factory=list)
    skipped: list = field(default_factory=list)


def _as_gaps(history) -> np.ndarray:
    if isinstance(history, FailureHistory):
        return history.gaps
    return np.asarray(history, dtype=float)


# ---------------------------------------------------------------------------
# Log-likelihoods (vectorised in the data, scalar in the parameters)
# ---------------------------------------------------------------------------


def log_likelihood(kind: SrgmKind, params: dict, history, end_time: float | None = None) -> float:
    """Family log-likelihood of the gap sequence observed on ``(0, end_time]``.

    ``end_time`` defaults to the last event; passing the full exposure adds
    the survival term for the censored open interval after it.
    """
    gaps = _as_gaps(history)
    if np.any(gaps <= 0):
        return -math.inf
    times = np.cumsum(gaps)
    T = float(times[-1]) if end_time is None else float(end_time)
    if T < times[-1] * (1 - 1e-12):
        return -math.inf
    kind = SrgmKind(kind)
    p = params
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if kind is SrgmKind.GO:
            a, b = p["a"], p["b"]
            if a <= 0 or b <= 0:
                return -math.inf
            ll = len(times) * math.log(a * b) - b * float(times.sum())
            ll -= a * -math.expm1(-b * T)
        elif kind is SrgmKind.DU:
            alpha, beta = p["alpha"], p["beta"]
            if alpha <= 0 or beta <= 0:
                return -math.inf
            ll = len(times) * math.log(alpha * beta) + (beta - 1.0) * float(
                np.log(times).sum()
            )
            ll -= alpha * T**beta
        elif kind is SrgmKind.MO:
            lam0, th0 = p["lam0"], p["theta0"]
            if lam0 <= 0 or th0 <= 0:
                return -math.inf
            ll = len(times) * math.log(lam0) - float(np.log1p(lam0 * th0 * times).sum())
            ll -= math.log1p(lam0 * th0 * T) / th0
        elif kind is SrgmKind.LI:
            N, alpha, beta = p["N"], p["alpha"], p["beta"]
            j = len(times)
            if alpha <= 0 or beta <= 0 or N <= j - 1:
                return -math.inf
            remaining = N - np.arange(j) + 0.0  # N - i + 1 for i = 1..j
            # log((beta+tau_{i-1})/(beta+tau_i)) without cancellation at
            # large beta, where the ratio is within rounding of 1.
            decay = np.log1p(-gaps / (beta + times))
            ll = float(np.log(remaining * alpha).sum() - np.log(beta + times).sum())
            ll += alpha * float((remaining * decay).sum())
            if T > times[-1]:
                ll += max(N - j, 0.0) * alpha * math.log1p(
                    -(T - times[-1]) / (beta + T)
                )
        else:  # LV
            alpha, b1, b2 = p["alpha"], p["beta1"], p["beta2"]
            j = len(times)
            psi = b1 + b2 * np.arange(1, j + 1)
            if alpha <= 0 or np.any(psi <= 0):
                return -math.inf
            # ln f = ln a - a log1p(t/psi) - ln(psi + t): the grouped form
            # survives scale parameters far above the data.
            ll = float(
                (math.log(alpha) - alpha * np.log1p(gaps / psi) - np.log(psi + gaps)).sum()
            )
            if T > times[-1]:
                psi_next = b1 + b2 * (j + 1)
                if psi_next <= 0:
                    return -math.inf
                ll -= alpha * math.log1p((T - times[-1]) / psi_next)
    return ll if np.isfinite(ll) else -math.inf


# ---------------------------------------------------------------------------
# Fitting
# ---------------------------------------------------------------------------


def _clipped_exp(v: float) -> float:
    return math.exp(min(max(v, -700.0), 700.0))


class _Objective:
    """Reduced-dimension negative log-likelihood for one simplex family.

    ``MO`` searches (log lam0, log theta0).  ``LI`` and ``LV`` search two
    shape-of-growth parameters and recover their scale parameter
    ``alpha`` from its closed-form profile maximiser, which removes the
    long flat ridge the full parameterisation has.  The likelihood is
    inlined against precomputed arrays; the public ``log_likelihood`` is
    the reference it must agree with (asserted in tests).
    """

    def __init__(self, kind: SrgmKind, gaps: np.ndarray, times: np.ndarray, T: float):
        self.kind = kind
        self.gaps = gaps
        self.times = times
        self.T = T
        self.j = len(gaps)
        self.mean_gap = float(gaps.mean())
        self.idx0 = np.arange(self.j)
        self.censor = T - float(times[-1])

    def _li_profile(self, N: float, beta: float):
        remaining = N - self.idx0
        decay = np.log1p(-self.gaps / (beta + self.times))
        c = float((remaining * decay).sum())
        if self.censor > 0:
            c += max(N - self.j, 0.0) * math.log1p(-self.censor / (beta + self.T))
        alpha = -self.j / c if c < 0 else math.inf
        return remaining, alpha

    def _lv_profile(self, beta1: float, beta2: float):
        psi = beta1 + beta2 * (self.idx0 + 1.0)
        if psi[0] <= 0 or psi[-1] <= 0:
            return None, math.nan
        s = float(np.log1p(self.gaps / psi).sum())
        if self.censor > 0:
            psi_next = beta1 + beta2 * (self.j + 1)
            if psi_next <= 0:
                return None, math.nan
            s += math.log1p(self.censor / psi_next)
        return psi, (self.j / s if s > 0 else math.inf)

    def unpack(self, vec: np.ndarray) -> dict:
        if self.kind is SrgmKind.MO:
            return {"lam0": _clipped_exp(vec[0]), "theta0": _clipped_exp(vec[1])}
        if self.kind is SrgmKind.LI:
            N = (self.j - 1) + _clipped_exp(vec[0])
            beta = _clipped_exp(vec[1])
            _, alpha = self._li_profile(N, beta)
            return {"N": N, "alpha": alpha, "beta": beta}
        # LV: vec = (log beta1, drift) with beta2 = drift * mean_gap / j
        beta1 = _clipped_exp(vec[0])
        beta2 = vec[1] * self.mean_gap / self.j
        _, alpha = self._lv_profile(beta1, beta2)
        return {"alpha": alpha, "beta1": beta1, "beta2": beta2}

    def pack(self, params: dict) -> np.ndarray:
        if self.kind is SrgmKind.MO:
            return np.array([math.log(params["lam0"]), math.log(params["theta0"])])
        if self.kind is SrgmKind.LI:
            return np.array(
                [math.log(params["N"] - (self.j - 1)), math.log(params["beta"])]
            )
        return np.array(
            [math.log(params["beta1"]), params["beta2"] * self.j / self.mean_gap]
        )

    def __call__(self, vec: np.ndarray) -> float:
        j = self.j
        if self.kind is SrgmKind.MO:
            lam0, th0 = _clipped_exp(vec[0]), _clipped_exp(vec[1])
            with np.errstate(over="ignore"):
                ll = j * math.log(lam0) - float(np.log1p(lam0 * th0 * self.times).sum())
                ll -= math.log1p(lam0 * th0 * self.T) / th0
            return -ll if np.isfinite(ll) else math.inf
        if self.kind is SrgmKind.LI:
            N = (j - 1) + _clipped_exp(vec[0])
            beta = _clipped_exp(vec[1])
            remaining, alpha = self._li_profile(N, beta)
            if not (np.isfinite(alpha) and alpha > 0):
                return math.inf
            ll = (
                float(np.log(remaining).sum())
                + j * math.log(alpha)
                - float(np.log(beta + self.times).sum())
                - j
            )
            return -ll if np.isfinite(ll) else math.inf
        beta1 = _clipped_exp(vec[0])
        beta2 = vec[1] * self.mean_gap / j
        psi, alpha = self._lv_profile(beta1, beta2)
        if psi is None or not (np.isfinite(alpha) and alpha > 0):
            return math.inf
        ll = j * math.log(alpha) - j - float(np.log(psi + self.gaps).sum())
        return -ll if np.isfinite(ll) else math.inf

    def starts(self) -> list:
        j, T, mean_gap = self.j, self.T, self.mean_gap
        if self.kind is SrgmKind.MO:
            rate = j / T
            return [
                np.array([math.log(lam_mult * rate), math.log(th / j)])
                for lam_mult, th in ((2.0, 1.0), (1.0, 0.1), (5.0, 3.0), (1.0, 10.0), (10.0, 0.3))
            ]
        if self.kind is SrgmKind.LI:
            return [
                np.array([math.log(max(n_mult * j - (j - 1), 1e-3)), math.log(b_mult * T)])
                for n_mult, b_mult in ((1.5, 0.5), (3.0, 1.0), (1.05, 0.1), (10.0, 2.0), (2.0, 5.0))
            ]
        half = max(j // 2, 1)
        drift = (float(self.gaps[half:].mean()) - float(self.gaps[:half].mean())) / mean_gap
        return [
            np.array([math.log(b1_mult * mean_gap), d])
            for b1_mult, d in (
                (1.0, 0.0),
                (1.0, drift),
                (3.0, drift),
                (0.3, 0.0),
                (10.0, max(drift, 0.0)),
            )
        ]


def fit(
    kind: SrgmKind,
    history,
    end_time: float | None = None,
    min_events: int = DEFAULT_MIN_FIT,
    warm_start: dict | None = None,
) -> FittedModel:
    """Maximum-likelihood fit of one family to a gap-sequence prefix.

    ``DU`` is solved exactly and ``GO`` by a profiled one-dimensional
    search; the remaining families run a Nelder-Mead simplex in a reduced
    log-parameter space from five heuristic start points.  A supplied
    ``warm_start`` (typically the previous rolling step's parameters) is
    tried first and trusted when it converges, which keeps expanding-
    prefix refits cheap.

    Raises ``InsufficientHistory`` below ``min_events`` events and
    ``FitDiverged`` when no start yields a finite maximised likelihood.
    """
    kind = SrgmKind(kind)
    gaps = _as_gaps(history)
    j = len(gaps)
    if j < max(min_events, 2):
        raise InsufficientHistory(f"{kind.value} needs >= {max(min_events, 2)} events, got {j}")
    if np.any(gaps <= 0):
        raise FitDiverged("gap sequence contains nonpositive values")
    times = np.cumsum(gaps)
    T = float(times[-1]) if end_time is None else float(end_time)

    if kind is SrgmKind.DU:
        params = _fit_du(gaps, times, T)
        return FittedModel(kind, params, j, log_likelihood(kind, params, gaps, T), T)
    if kind is SrgmKind.GO:
        params = _fit_go(gaps, times, T)
        return FittedModel(kind, params, j, log_likelihood(kind, params, gaps, T), T)

    objective = _Objective(kind, gaps, times, T)
    warm_vec = None
    if warm_start is not None:
        try:
            warm_vec = objective.pack(warm_start)
        except (ValueError, KeyError):
            warm_vec = None

    best = None
    if warm_vec is not None and np.isfinite(objective(warm_vec)):
        # One extra observation barely moves the optimum, so a small
        # simplex around the previous solution converges in a few dozen
        # evaluations instead of rebuilding from scratch.
        simplex = np.tile(warm_vec, (len(warm_vec) + 1, 1))
        for d in range(len(warm_vec)):
            simplex[d + 1, d] += 0.02
        res = minimize(
            objective,
            warm_vec,
            method="Nelder-Mead",
            options={
                "xatol": 1e-5,
                "fatol": 1e-7,
                "maxiter": 400,
                "maxfev": 400,
                "initial_simplex": simplex,
            },
        )
        if np.isfinite(res.fun):
            best = res
    if best is None:
        for x0 in objective.starts():
            if not np.isfinite(objective(x0)):
                continue
            res = minimize(
                objective,
                x0,
                method="Nelder-Mead",
                options={"xatol": 1e-5, "fatol": 1e-7, "maxiter": 1500, "maxfev": 1500},
            )
            if np.isfinite(res.fun) and (best is None or res.fun < best.fun):
                best = res
    if best is None:
        raise FitDiverged(f"{kind.value}: no start point produced a finite likelihood")
    params = objective.unpack(best.x)
    return FittedModel(kind, params, j, -float(best.fun), T)


def _fit_du(gaps: np.ndarray, times: np.ndarray, T: float) -> dict:
    # Exact power-law MLE: beta from the log-spacing statistic, alpha by
    # matching the expected count at T.
    j = len(times)
    s = float(np.log(T / times).sum())
    if s <= 0:
        raise FitDiverged("DU: all events at the observation boundary")
    beta = j / s
    alpha = j / T**beta
    return {"alpha": alpha, "beta": beta}


def _fit_go(gaps: np.ndarray, times: np.ndarray, T: float) -> dict:
    # Profile out a: given b, the count equation fixes a = j / (1 - e^(-bT)).
    j = len(times)
    sum_t = float(times.sum())

    def profile_nll(log_b: float) -> float:
        b = math.exp(log_b)
        a = j / -math.expm1(-b * T)
        return -(j * math.log(a * b) - b * sum_t - j)

    lo, hi = math.log(1e-9 / T), math.log(1e4 / T)
    grid = np.linspace(lo, hi, 60)
    values = [profile_nll(g) for g in grid]
    i = int(np.argmin(values))
    bracket_lo = grid[max(i - 1, 0)]
    bracket_hi = grid[min(i + 1, len(grid) - 1)]
    res = minimize_scalar(
        profile_nll, bounds=(bracket_lo, bracket_hi), method="bounded",
        options={"xatol": 1e-10},
    )
    b = math.exp(float(res.x))
    a = j / -math.expm1(-b * T)
    if not (np.isfinite(a) and a > 0):
        raise FitDiverged("GO: profile likelihood has no interior optimum")
    return {"a": a, "b": b}


# ---------------------------------------------------------------------------
# Prediction
# ---------------------------------------------------------------------------


def predict_next(model: FittedModel, history) -> PredictiveDistribution:
    """Distribution of miles from the last event to the next one.

    For the Poisson-process families this is
    ``cdf(x) = 1 - exp(-(m(t_j + x) - m(t_j)))``; for ``LI`` and ``LV``
    the conditional gap distribution is Pareto-shaped in closed form.  The
    model must have been fitted on exactly the supplied prefix.
    """
    gaps = _as_gaps(history)
    if len(gaps) != model.history_length:
        raise ValueError(
            f"model was fitted on {model.history_length} events, history has {len(gaps)}"
        )
    tau = float(np.sum(gaps))
    kind = SrgmKind(model.kind)
    p = model.parameters
    mean_gap = float(np.mean(gaps)) if len(gaps) else 1.0

    if kind in (SrgmKind.GO, SrgmKind.DU, SrgmKind.MO):
        if kind is SrgmKind.GO:
            a, b = p["a"], p["b"]

            def delta_m(x):
                return a * math.exp(-b * tau) * -math.expm1(-b * x)

            def log_rate(x):
                return math.log(a * b) - b * (tau + x)

            mass_limit = -math.expm1(-a * math.exp(-b * tau))
        elif kind is SrgmKind.DU:
            alpha, beta = p["alpha"], p["beta"]

            def delta_m(x):
                if tau == 0.0:
                    return alpha * x**beta
                # alpha ((tau+x)^beta - tau^beta) without cancellation at x << tau
                return alpha * tau**beta * math.expm1(beta * math.log1p(x / tau))

            def log_rate(x):
                return math.log(alpha * beta) + (beta - 1.0) * math.log(tau + x)

            mass_limit = 1.0
        else:
            lam0, th0 = p["lam0"], p["theta0"]

            def delta_m(x):
                return math.log1p(lam0 * th0 * x / (1.0 + lam0 * th0 * tau)) / th0

            def log_rate(x):
                return math.log(lam0) - math.log1p(lam0 * th0 * (tau + x))

            mass_limit = 1.0

        def cdf(x):
            return -math.expm1(-delta_m(x))

        def log_density(x):
            return log_rate(x) - delta_m(x)

        return PredictiveDistribution(cdf, log_density, mass_limit, scale_hint=mean_gap)

    if kind is SrgmKind.LI:
        N, alpha, beta = p["N"], p["alpha"], p["beta"]
        shape = max(N - model.history_length, 0.0) * alpha
        scale = beta + tau
        if shape <= 0:
            # No faults left: the model predicts no further failure at all.
            return PredictiveDistribution(
                lambda x: 0.0, lambda x: -math.inf, mass_limit=0.0, scale_hint=mean_gap
            )
    else:
        shape = p["alpha"]
        scale = p["beta1"] + p["beta2"] * (model.history_length + 1)
        if scale <= 0:
            raise NoFiniteMedian("LV scale is nonpositive at the next index")

    def cdf(x, shape=shape, scale=scale):
        return -math.expm1(-shape * math.log1p(x / scale))

    def log_density(x, shape=shape, scale=scale):
        return math.log(shape) - shape * math.log1p(x / scale) - math.log(scale + x)

    # The Pareto median is closed-form; handing it to the solver as the
    # bracket seed keeps ridge-scale fits (huge scale, huge shape) cheap.
    with np.errstate(over="ignore"):
        hint = scale * math.expm1(min(math.log(2.0) / shape, 700.0))
    if not (np.isfinite(hint) and hint > 0):
        hint = mean_gap
    return PredictiveDistribution(cdf, log_density, 1.0, scale_hint=min(hint, 1e290))


def rolling_predictions(
    kind: SrgmKind,
    history,
    start_index: int = DEFAULT_ROLLING_START,
    min_events: int = DEFAULT_MIN_FIT,
) -> RollingResult:
    """One-step-ahead prequential protocol over an expanding prefix.

    For each ``j`` from ``start_index`` to the end of the history, the
    model is refitted on the first ``j`` gaps (warm-started from the
    previous step) and queried at the realized gap ``j+1``: its predictive
    CDF value ``u``, log density, and median enter the record.  Steps
    whose fit diverges are listed in ``skipped``, never interpolated.
    """
    kind = SrgmKind(kind)
    gaps = _as_gaps(history)
    if start_index < max(min_events, 2):
        raise InsufficientHistory(
            f"start_index {start_index} is below the minimum fit length {min_events}"
        )
    result = RollingResult()
    warm = None
    for j in range(start_index, len(gaps)):
        try:
            model = fit(kind, gaps[:j], min_events=min_events, warm_start=warm)
            predictive = predict_next(model, gaps[:j])
        except (FitDiverged, InsufficientHistory):
            warm = None
            result.skipped.append(j)
            continue
        warm = model.parameters
        realized = float(gaps[j])
        try:
            median = predictive.median
        except NoFiniteMedian:
            median = None
        result.records.append(
            PredictionRecord(
                index=j,
                u=predictive.cdf(realized),
                log_density=predictive.log_density(realized),
                median=median,
                realized=realized,
            )
        )
        result.predictives.append(predictive)
    return result


# ---------------------------------------------------------------------------
# Diagnostics and simulation
# ---------------------------------------------------------------------------


def time_rescaling_distance(model: FittedModel, history) -> float:
    """Kolmogorov distance of rescaled gaps from unit exponential.

    Under a well-specified Poisson-family fit, the transformed gaps
    ``m(t_i) - m(t_(i-1))`` are unit-exponential.  Reported as a
    diagnostic, not asserted: small samples and non-Poisson families make
    it a rough guide only.
    """
    gaps = _as_gaps(history)
    times = np.cumsum(gaps)
    kind = SrgmKind(model.kind)
    p = model.parameters
    if kind is SrgmKind.GO:
        m = p["a"] * -np.expm1(-p["b"] * times)
    elif kind is SrgmKind.DU:
        m = p["alpha"] * times ** p["beta"]
    elif kind is SrgmKind.MO:
        m = np.log1p(p["lam0"] * p["theta0"] * times) / p["theta0"]
    elif kind is SrgmKind.LI:
        remaining = p["N"] - np.arange(len(times)) + 0.0
        steps = remaining * p["alpha"] * -np.log1p(-gaps / (p["beta"] + times))
        m = np.cumsum(steps)
    else:
        psi = p["beta1"] + p["beta2"] * np.arange(1, len(times) + 1)
        steps = p["alpha"] * np.log1p(gaps / psi)
        m = np.cumsum(steps)
    rescaled = np.diff(m, prepend=0.0)
    u = np.sort(-np.expm1(-rescaled))
    n = len(u)
    ranks = np.arange(1, n + 1) / n
    return float(np.max(np.maximum(ranks - u, u - (ranks - 1.0 / n))))


def simulate_history(
    kind: SrgmKind, params: dict, n_events: int, rng: np.random.Generator
) -> np.ndarray:
    """Draw ``n_events`` inter-failure miles from a family, for validation.

    Poisson families go through inversion of the mean function applied to
    unit-rate arrival times; ``LI`` and ``LV`` invert their per-gap
    survival functions directly.
    """
    kind = SrgmKind(kind)
    if kind in (SrgmKind.GO, SrgmKind.DU, SrgmKind.MO):
        arrivals = np.cumsum(rng.exponential(1.0, size=n_events))
        if kind is SrgmKind.GO:
            a, b = params["a"], params["b"]
            if arrivals[-1] >= a:
                raise ValueError(
                    f"GO process with a={a} exhausts before {n_events} events"
                )
            times = -np.log1p(-arrivals / a) / b
        elif kind is SrgmKind.DU:
            times = (arrivals / params["alpha"]) ** (1.0 / params["beta"])
        else:
            lam0, th0 = params["lam0"], params["theta0"]
            times = np.expm1(th0 * arrivals) / (lam0 * th0)
        return np.diff(times, prepend=0.0)

    gaps = np.empty(n_events)
    if kind is SrgmKind.LI:
        N, alpha, beta = params["N"], params["alpha"], params["beta"]
        tau = 0.0
        for i in range(1, n_events + 1):
            remaining = N - i + 1
            if remaining <= 0:
                raise ValueError(f"LI process with N={N} exhausts before {n_events} events")
            u = rng.random()
            gap = (beta + tau) * (u ** (-1.0 / (remaining * alpha)) - 1.0)
            gaps[i - 1] = gap
            tau += gap
    else:
        alpha = params["alpha"]
        idx = np.arange(1, n_events + 1)
        psi = params["beta1"] + params["beta2"] * idx
        if np.any(psi <= 0):
            raise ValueError("LV scale must stay positive over the requested horizon")
        u = rng.random(n_events)
        gaps = psi * (u ** (-1.0 / alpha) - 1.0)
    return gaps
