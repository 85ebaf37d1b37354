"""Monthly disengagement reports and their expansion to inter-failure miles.

Regulator-published road-test data arrives as monthly totals (miles
driven, disengagement count).  Trend models need an ordered sequence of
inter-failure miles, so each month's events are placed uniformly at
random within the month's mileage -- the order statistics of a
homogeneous Poisson process conditioned on its count -- and the placed
positions are differenced across month boundaries.  The placement is the
only randomness in the whole pipeline; repeating analyses over several
seeds measures its influence.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import InvalidConstraints, NonMonotoneMonths, ParseError

__all__ = [
    "MonthlyRecord",
    "FailureHistory",
    "parse_monthly_csv",
    "expand_to_interfailure",
    "write_interfailure_csv",
    "read_interfailure_csv",
    "waymo_fixture_path",
]

_HEADER = ["month", "miles", "disengagements"]


@dataclass(frozen=True)
class MonthlyRecord:
    """One report row: month ordinal (file order), miles, event count."""

    month_index: int
    miles: float
    disengagements: int

    def __post_init__(self):
        if self.miles < 0:
            raise InvalidConstraints(f"miles must be nonnegative, got {self.miles}")
        if self.disengagements < 0:
            raise InvalidConstraints(
                f"disengagement count must be nonnegative, got {self.disengagements}"
            )
        if self.disengagements > 0 and self.miles <= 0:
            raise InvalidConstraints("events require positive mileage in the month")


@dataclass(frozen=True)
class FailureHistory:
    """Ordered inter-failure miles plus the total exposure they came from.

    ``sum(interfailure_miles)`` ends at the last event; the remainder up
    to ``total_miles`` is the censored open interval after it.
    """

    interfailure_miles: tuple
    total_miles: float
    seed: int

    def __post_init__(self):
        gaps = np.asarray(self.interfailure_miles, dtype=float)
        if gaps.size and gaps.min() <= 0:
            raise InvalidConstraints("inter-failure miles must be positive")
        if gaps.sum() > self.total_miles * (1 + 1e-12):
            raise InvalidConstraints("inter-failure miles exceed total exposure")

    def __len__(self):
        return len(self.interfailure_miles)

    @property
    def gaps(self) -> np.ndarray:
        return np.asarray(self.interfailure_miles, dtype=float)

    @property
    def censored_tail(self) -> float:
        """Miles driven after the last event (no failure observed in them)."""
        return self.total_miles - float(self.gaps.sum())


def parse_monthly_csv(source) -> list[MonthlyRecord]:
    """Parse ``month,miles,disengagements`` rows into records.

    ``source`` may be a path, a text stream, or a bytes stream (UTF-8).
    Month labels must be strictly increasing in file order (ISO ``YYYY-MM``
    labels compare correctly as strings; integer labels numerically).
    Raises ``ParseError`` with the offending line number, or
    ``NonMonotoneMonths`` for out-of-order rows.
    """
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source, "r", encoding="utf-8", newline="") as handle:
            return _parse_rows(handle)
    if isinstance(source, io.BufferedIOBase) or (
        hasattr(source, "read") and isinstance(source.read(0), bytes)
    ):
        return _parse_rows(io.TextIOWrapper(source, encoding="utf-8"))
    return _parse_rows(source)


def _month_key(label: str, line: int):
    label = label.strip()
    if not label:
        raise ParseError("empty month label", line)
    try:
        return (0, int(label))
    except ValueError:
        return (1, label)


def _parse_rows(handle) -> list[MonthlyRecord]:
    reader = csv.reader(handle)
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty input, expected a header row", 1) from None
    if [h.strip().lower() for h in header] != _HEADER:
        raise ParseError(f"expected header {','.join(_HEADER)!r}, got {','.join(header)!r}", 1)

    records = []
    last_key = None
    for line, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 3:
            raise ParseError(f"expected 3 fields, got {len(row)}", line)
        key = _month_key(row[0], line)
        if last_key is not None and key <= last_key:
            raise NonMonotoneMonths(
                f"month {row[0].strip()!r} does not follow the previous row", line
            )
        last_key = key
        try:
            miles = float(row[1])
            disengagements = int(row[2])
        except ValueError as exc:
            raise ParseError(str(exc), line) from None
        try:
            records.append(
                MonthlyRecord(
                    month_index=len(records), miles=miles, disengagements=disengagements
                )
            )
        except InvalidConstraints as exc:
            raise ParseError(str(exc), line) from None
    return records


def expand_to_interfailure(records: list[MonthlyRecord], seed: int) -> FailureHistory:
    """Place each month's events uniformly within the month and difference.

    Within a month of ``m`` miles holding ``d`` events, the event
    positions are the sorted values of ``d`` uniform draws on (0, m] --
    exactly the conditional law of a homogeneous Poisson process given its
    count.  Positions are offset by the cumulative mileage of earlier
    months, so months with zero events simply stretch the surrounding
    gap.  Deterministic for a fixed seed.
    """
    rng = np.random.default_rng(seed)
    positions = []
    offset = 0.0
    for rec in records:
        if rec.disengagements > 0:
            draws = rec.miles * (1.0 - rng.random(rec.disengagements))
            positions.append(offset + np.sort(draws))
        offset += rec.miles
    if positions:
        events = np.concatenate(positions)
        gaps = np.diff(events, prepend=0.0)
    else:
        gaps = np.empty(0)
    return FailureHistory(
        interfailure_miles=tuple(float(g) for g in gaps),
        total_miles=offset,
        seed=seed,
    )


def write_interfailure_csv(history: FailureHistory, path) -> None:
    """Serialize as ``index,interfailure_miles`` (the interchange format)."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["index", "interfailure_miles"])
        for i, gap in enumerate(history.interfailure_miles):
            writer.writerow([i, repr(gap)])


def read_interfailure_csv(source) -> FailureHistory:
    """Read the ``index,interfailure_miles`` interchange format.

    Exposure beyond the last event is not part of the format, so the
    returned history has ``total_miles`` equal to the sum of the gaps and
    an empty censored tail.
    """
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source, "r", encoding="utf-8", newline="") as handle:
            return read_interfailure_csv(handle)
    reader = csv.reader(source)
    header = next(reader, None)
    if header is None or [h.strip().lower() for h in header] != ["index", "interfailure_miles"]:
        raise ParseError("expected header 'index,interfailure_miles'", 1)
    gaps = []
    for line, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        try:
            gaps.append(float(row[1]))
        except (IndexError, ValueError) as exc:
            raise ParseError(str(exc), line) from None
    total = float(np.sum(gaps)) if gaps else 0.0
    return FailureHistory(interfailure_miles=tuple(gaps), total_miles=total, seed=0)


def waymo_fixture_path():
    """Path to the bundled 51-month, 528-event monthly report fixture."""
    return resources.files("avreliability").joinpath("data/waymo_monthly.csv")
