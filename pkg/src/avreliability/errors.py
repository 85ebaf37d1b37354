"""Exception hierarchy shared across the toolkit.

Everything derives from :class:`ReliabilityError` so callers (and the CLI)
can catch domain failures without swallowing programming errors.
"""


class ReliabilityError(Exception):
    """Base class for all domain errors raised by this package."""


class InvalidConstraints(ReliabilityError):
    """A domain type's invariants were violated at construction."""


class ClaimBelowGoal(ReliabilityError):
    """The claimed bound does not exceed the engineering goal.

    No amount of testing supports a claim at or below the goal: the
    worst-case posterior confidence is identically zero there, so no
    informative worst-case prior exists.
    """


class Unsatisfiable(ReliabilityError):
    """No finite amount of testing reaches the requested confidence."""


class NoClaimSupportable(ReliabilityError):
    """Even a claim arbitrarily close to 1 fails to reach the confidence."""


class NormalizationFailure(ReliabilityError):
    """The posterior normalizer underflowed to zero at working precision."""


class ParseError(ReliabilityError):
    """Malformed input data; carries the 1-based line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NonMonotoneMonths(ParseError):
    """Monthly report rows are not in strictly increasing month order."""


class FitDiverged(ReliabilityError):
    """Model fitting failed to converge or hit a parameter-domain boundary."""


class InsufficientHistory(ReliabilityError):
    """Too few events to fit the requested model family."""


class NoFiniteMedian(ReliabilityError):
    """The predictive distribution is defective with total mass below 0.5."""


class InsufficientWarmup(ReliabilityError):
    """Not enough prior prediction records to build a recalibration map."""


class MisalignedRecords(ReliabilityError):
    """Two prediction-record streams do not cover the same step indices."""
