"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command line front end:
2 for configuration problems, 3 for input/data problems, 4 for numeric or
internal failures.
"""

from __future__ import annotations


class LoadClustError(Exception):
    exit_code = 4


# -- configuration -----------------------------------------------------------


class ValidationError(LoadClustError):
    """Aggregated configuration error.

    ``problems`` is a list of ``(field_path, message)`` tuples covering every
    violated constraint, not just the first one found.
    """

    exit_code = 2

    def __init__(self, problems):
        self.problems = list(problems)
        lines = [f"{path}: {msg}" for path, msg in self.problems]
        super().__init__("invalid configuration:\n  " + "\n  ".join(lines))

    @property
    def fields(self):
        return [path for path, _ in self.problems]


# -- input data ----------------------------------------------------------------


class DataError(LoadClustError):
    exit_code = 3


class EmptyInput(DataError):
    pass


class MissingColumn(DataError):
    pass


class InvalidTimestamp(DataError):
    pass


class DuplicateSample(DataError):
    pass


class NonDivisibleResolution(DataError):
    pass


class InsufficientData(DataError):
    pass


# -- numerics ----------------------------------------------------------------


class NumericError(LoadClustError, ValueError):
    exit_code = 4


class LengthMismatch(NumericError):
    pass


class EmptySeries(NumericError):
    pass


class InfeasibleWindow(NumericError):
    pass


class ZeroVector(NumericError):
    pass


class KTooLarge(NumericError):
    pass


class WardRequiresEuclidean(NumericError):
    pass


class DegenerateK(NumericError):
    pass


class CoincidentCentroids(NumericError):
    pass


class StageError(LoadClustError):
    """A pipeline stage failed; wraps the underlying cause."""

    def __init__(self, stage, cause, completed=()):
        self.stage = stage
        self.cause = cause
        self.completed = tuple(completed)
        self.exit_code = getattr(cause, "exit_code", 4)
        done = ", ".join(self.completed) or "none"
        super().__init__(f"stage '{stage}' failed: {cause} (completed stages: {done})")
