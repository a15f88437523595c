"""Exception types shared across the package.

Three failure families are kept distinct so callers (and the CLI exit-code
mapping) can tell them apart:

  * DomainError      -- an argument is outside the mathematical domain of an
                        operation (bad fractional order, zero denominator, ...).
  * ValidationError  -- structured input (scenario files, parameter sets)
                        failed a consistency check; carries the offending key
                        and, for files, the line number.
  * NumericalError   -- a computation started from valid inputs but failed
                        numerically (overflow, NaN, non-convergent series);
                        carries the step or term index where it happened.
"""

from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class ValidationError(ValueError):
    """Structured input failed validation.

    Attributes:
        key: Name of the offending field or file key, when known.
        line: 1-based line number in the source file, when known.
    """

    def __init__(self, message: str, *, key: str | None = None,
                 line: int | None = None):
        super().__init__(message)
        self.key = key
        self.line = line


class NumericalError(RuntimeError):
    """A computation failed numerically (non-finite values, no convergence).

    Attributes:
        step_index: Index of the step or term at which the failure was
            detected, when known.
    """

    def __init__(self, message: str, *, step_index: int | None = None):
        super().__init__(message)
        self.step_index = step_index
