"""Prequential scoring of one-step-ahead predictions.

Each prediction is reduced to the probability ``u`` it assigned to the
outcome that then occurred (the predictive CDF at the realized value) and
the log density there.  Perfectly calibrated predictions make the ``u``
sequence uniform; the u-plot measures the departure, recalibration
composes a predictor with the empirical shape of its own past departures,
and the prequential likelihood ratio compares two predictors' accumulated
densities on the same outcomes.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_WARMUP, LOG_DENSITY_FLOOR
from .errors import InsufficientWarmup, InvalidConstraints, MisalignedRecords, ParseError
from .predictive import PredictiveDistribution

__all__ = [
    "PredictionRecord",
    "UPlot",
    "u_plot",
    "recalibrate",
    "recalibrated_stream",
    "recalibrated_u_values",
    "plr",
    "write_records_csv",
    "read_records_csv",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PredictionRecord:
    """One prediction confronted with its outcome.

    ``u`` is the predictive CDF at the realized miles, ``log_density`` the
    predictive log density there, ``median`` the predicted median miles
    (None when the predictive was too defective to have one).
    """

    index: int
    u: float
    log_density: float
    median: float | None
    realized: float

    def __post_init__(self):
        if not (-1e-12 <= self.u <= 1.0 + 1e-12):
            raise InvalidConstraints(f"u must lie in [0, 1], got {self.u}")


@dataclass(frozen=True)
class UPlot:
    """Sorted ``u`` values with their Kolmogorov distance from uniformity."""

    sorted_u: tuple
    ks_distance: float


def u_plot(records: list) -> UPlot:
    """Empirical CDF of the ``u`` values against the diagonal.

    The Kolmogorov distance is the largest vertical gap between the step
    function through the sorted ``u`` values and the identity.
    """
    if not records:
        raise InvalidConstraints("u_plot needs at least one record")
    u = np.sort(np.clip([r.u for r in records], 0.0, 1.0))
    n = len(u)
    steps = np.arange(1, n + 1) / n
    ks = float(np.max(np.maximum(steps - u, u - (steps - 1.0 / n))))
    return UPlot(sorted_u=tuple(float(x) for x in u), ks_distance=ks)


def _joined_polygon(prior_records: list) -> tuple[np.ndarray, np.ndarray]:
    """Piecewise-linear joined u-plot: through step midpoints, pinned at 0 and 1."""
    u = np.sort(np.clip([r.u for r in prior_records], 0.0, 1.0))
    n = len(u)
    mids = (np.arange(1, n + 1) - 0.5) / n
    xs = np.concatenate(([0.0], u, [1.0]))
    ys = np.concatenate(([0.0], mids, [1.0]))
    return xs, ys


def _polygon_log_slope(xs: np.ndarray, ys: np.ndarray, x: float) -> float:
    i = int(np.searchsorted(xs, x, side="right")) - 1
    i = min(max(i, 0), len(xs) - 2)
    dx = xs[i + 1] - xs[i]
    dy = ys[i + 1] - ys[i]
    if dx <= 0:
        return math.inf
    if dy <= 0:
        return -math.inf
    return math.log(dy) - math.log(dx)


def recalibrate(
    raw: PredictiveDistribution, prior_records: list, warmup: int = DEFAULT_WARMUP
) -> PredictiveDistribution:
    """Compose a predictive with the joined u-plot of its past errors.

    The transformed CDF is ``G(F(t))`` where ``G`` is the piecewise-linear
    polygon through the prior u-plot's step midpoints, anchored at (0,0)
    and (1,1); the density picks up the polygon slope by the chain rule.
    A perfectly diagonal history makes this the identity.  Requires at
    least ``warmup`` prior records.
    """
    if len(prior_records) < warmup:
        raise InsufficientWarmup(
            f"recalibration needs >= {warmup} prior records, got {len(prior_records)}"
        )
    xs, ys = _joined_polygon(prior_records)

    def cdf(x):
        return float(np.interp(raw.cdf(x), xs, ys))

    def log_density(x):
        return raw.log_density(x) + _polygon_log_slope(xs, ys, raw.cdf(x))

    mass_limit = float(np.interp(raw.mass_limit, xs, ys))
    return PredictiveDistribution(cdf, log_density, mass_limit, scale_hint=raw.scale_hint)


def recalibrated_stream(
    records: list, predictives: list, warmup: int = DEFAULT_WARMUP
) -> tuple[list, list]:
    """Strictly prequential recalibration of a prediction stream.

    The polygon applied at stream position ``m`` is built from records
    strictly before ``m`` only, so recalibrated predictions never see
    their own outcome.  Returns the recalibrated records (starting at
    position ``warmup``) and their predictives.  The recalibrated ``u`` is
    computed by mapping the raw ``u`` through the polygon directly, which
    is exactly the recalibrated CDF at the realized value.
    """
    if len(records) != len(predictives):
        raise MisalignedRecords("records and predictives differ in length")
    if len(records) < warmup + 1:
        raise InsufficientWarmup(
            f"stream of {len(records)} records cannot recalibrate past warmup {warmup}"
        )
    out_records = []
    out_predictives = []
    for m in range(warmup, len(records)):
        prior = records[:m]
        raw_rec = records[m]
        recal = recalibrate(predictives[m], prior, warmup=warmup)
        xs, ys = _joined_polygon(prior)
        u = float(np.interp(raw_rec.u, xs, ys))
        log_density = raw_rec.log_density + _polygon_log_slope(xs, ys, raw_rec.u)
        try:
            median = recal.median
        except Exception:
            median = None
        out_records.append(
            PredictionRecord(
                index=raw_rec.index,
                u=u,
                log_density=log_density,
                median=median,
                realized=raw_rec.realized,
            )
        )
        out_predictives.append(recal)
    return out_records, out_predictives


def recalibrated_u_values(records: list, warmup: int = DEFAULT_WARMUP) -> list:
    """Prequentially recalibrated ``u`` values from records alone.

    Equivalent to running ``recalibrated_stream`` and reading off ``u``,
    but needs no predictive distributions: the recalibrated CDF at the
    realized value is exactly the polygon applied to the raw ``u``.
    """
    if len(records) < warmup + 1:
        raise InsufficientWarmup(
            f"stream of {len(records)} records cannot recalibrate past warmup {warmup}"
        )
    out = []
    for m in range(warmup, len(records)):
        xs, ys = _joined_polygon(records[:m])
        out.append(float(np.interp(records[m].u, xs, ys)))
    return out


def plr(records_a: list, records_b: list) -> np.ndarray:
    """Running log prequential likelihood ratio of predictor A over B.

    Element ``k`` is the sum over the first ``k+1`` aligned steps of
    ``log_density_A - log_density_B``; sustained growth favours A.  Log
    densities are floored at the float64 underflow point before
    differencing (floored steps are logged).  Both streams must cover
    exactly the same step indices.
    """
    if len(records_a) != len(records_b):
        raise MisalignedRecords(
            f"streams differ in length: {len(records_a)} vs {len(records_b)}"
        )
    if not records_a:
        return np.empty(0)
    idx_a = [r.index for r in records_a]
    idx_b = [r.index for r in records_b]
    if idx_a != idx_b:
        raise MisalignedRecords("streams cover different step indices")
    la = np.array([r.log_density for r in records_a])
    lb = np.array([r.log_density for r in records_b])
    floored = (la < LOG_DENSITY_FLOOR) | (lb < LOG_DENSITY_FLOOR)
    if floored.any():
        logger.warning(
            "plr: %d of %d steps had log densities floored at %.0f",
            int(floored.sum()), len(la), LOG_DENSITY_FLOOR,
        )
    la = np.maximum(la, LOG_DENSITY_FLOOR)
    lb = np.maximum(lb, LOG_DENSITY_FLOOR)
    return np.cumsum(la - lb)


def write_records_csv(records: list, path) -> None:
    """Serialize records as ``index,u,log_density,median,realized``."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["index", "u", "log_density", "median", "realized"])
        for r in records:
            writer.writerow(
                [
                    r.index,
                    repr(r.u),
                    repr(r.log_density),
                    "" if r.median is None else repr(r.median),
                    repr(r.realized),
                ]
            )


def read_records_csv(source) -> list:
    """Read the record interchange format written by ``write_records_csv``."""
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source, "r", encoding="utf-8", newline="") as handle:
            return read_records_csv(handle)
    reader = csv.reader(source)
    header = next(reader, None)
    expected = ["index", "u", "log_density", "median", "realized"]
    if header is None or [h.strip().lower() for h in header] != expected:
        raise ParseError(f"expected header {','.join(expected)!r}", 1)
    records = []
    for line, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        try:
            records.append(
                PredictionRecord(
                    index=int(row[0]),
                    u=float(row[1]),
                    log_density=float(row[2]),
                    median=None if row[3].strip() == "" else float(row[3]),
                    realized=float(row[4]),
                )
            )
        except (IndexError, ValueError) as exc:
            raise ParseError(str(exc), line) from None
    return records
