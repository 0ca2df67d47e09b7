"""Exception types shared across the package."""

from __future__ import annotations


class SympjetError(Exception):
    """Base class for all package errors."""


class ShapeError(SympjetError):
    """Operands disagree in variable count, order, dimension or variance."""


class SingularityError(SympjetError):
    """A matrix or series that must be invertible is singular at the origin."""


class OrderError(SympjetError):
    """A requested derivative order exceeds the available truncation order."""


class IntegrabilityError(SympjetError):
    """Cross-derivative compatibility fails; carries the first witness."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class DomainError(SympjetError):
    """Input outside the mathematical domain (e.g. an isotropic 2-plane)."""


class ConditionError(SympjetError):
    """Point data violates named admissibility conditions.

    ``failures`` is a list of (condition_name, witness) pairs, in the fixed
    order the conditions are checked.
    """

    def __init__(self, failures):
        self.failures = list(failures)
        self.conditions = [name for name, _ in self.failures]
        super().__init__(
            "violated conditions: " + ", ".join(self.conditions)
        )


class ChartParseError(SympjetError):
    """Malformed chart file or expression; carries line/column when known."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"{message} (line {line}, column {col})"
        super().__init__(message)


class ValidationFailure(SympjetError):
    """A chart failed validation; carries the full report."""

    def __init__(self, report):
        self.report = report
        failed = ", ".join(c.name for c in report.checks if not c.passed)
        super().__init__(f"chart validation failed: {failed}")
