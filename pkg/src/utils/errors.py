"""Custom exception hierarchy for mp2s-lab.

Every error raised by the simulator, the disjointness toolkit and the
lower-bound machinery derives from ``Mp2sError`` so callers (the CLI in
particular) can catch all application errors with one except clause and
still branch on the family.

Usage:
    from src.utils.errors import StallError

    if idle_steps > automaton.params.m:
        raise StallError("no head advanced", details={"steps": step_no})
"""

from __future__ import annotations

from typing import Optional


class Mp2sError(Exception):
    """Base exception for all mp2s-lab errors.

    Attributes:
        message: Human-readable error message
        details: Optional dict with additional context (parameters, positions, paths)
    """

    def __init__(self, message: str, details: Optional[dict] = None):
        self.message = message
        self.details = details or {}
        super().__init__(self.message)

    def __str__(self):
        if self.details:
            details_str = ", ".join(f"{k}={v}" for k, v in self.details.items())
            return f"{self.message} [{details_str}]"
        return self.message


# === Validation Errors ===

class ValidationError(Mp2sError):
    """Base class for input validation errors."""
    pass


class InvalidParameterError(ValidationError):
    """Raised when a parameter value is invalid.

    Example:
        raise InvalidParameterError(
            "kf must be non-negative",
            details={"parameter": "kf", "value": -1, "constraint": ">= 0"}
        )
    """
    pass


class InvalidSizeError(InvalidParameterError):
    """Raised when an instance size n is out of range (n < 1)."""
    pass


class StateBudgetExceededError(ValidationError):
    """Raised when the declared state set is larger than the budget m."""
    pass


class InvalidStartStateError(ValidationError):
    """Raised when the start state is not a member of the declared state set."""
    pass


class DivisibilityError(ValidationError):
    """Raised when a block count does not divide the instance size."""
    pass


class NotPerfectSquareError(ValidationError):
    """Raised when an algorithm needs a perfect-square instance size."""
    pass


class InvalidSpecError(ValidationError):
    """Raised when a fixture specification is self-defeating.

    Example:
        a crippled automaton that remembers every index is the trivial one.
    """
    pass


class LayoutMismatchError(ValidationError):
    """Raised when a trace does not belong to the instance it is analyzed against."""
    pass


class EnumerationTooLargeError(ValidationError):
    """Raised when exhaustive enumeration is requested beyond the configured limit."""
    pass


# === Simulation Errors ===

class SimulationError(Mp2sError):
    """Base class for errors raised while executing an automaton."""
    pass


class StallError(SimulationError):
    """Raised when m+1 consecutive steps advance no head (the run loops forever)."""
    pass


class TransitionUndefinedError(SimulationError):
    """Raised when a table-loaded automaton has no row for (state, symbols)."""
    pass


class StateOutOfSpaceError(SimulationError):
    """Raised when delta returns a state outside Q or a mask of the wrong length."""
    pass


class RunFinishedError(SimulationError):
    """Raised when stepping a configuration whose heads have all passed their streams."""
    pass


# === Trace Errors ===

class TraceError(Mp2sError):
    """Base class for trace analysis errors."""
    pass


class IncompleteTraceError(TraceError):
    """Raised when a trace ends before every head has left the inspected block."""
    pass


# === File Format Errors ===

class FormatError(Mp2sError):
    """Base class for errors in the line-oriented file formats."""
    pass


class AutomatonFileError(FormatError):
    """Raised when an automaton description file is malformed or incomplete."""
    pass


class StreamFileError(FormatError):
    """Raised when a stream file contains tokens outside the a<i>/b<i> grammar."""
    pass


# Convenience mapping for error codes
ERROR_CODES = {
    "INVALID_PARAMETER": InvalidParameterError,
    "INVALID_SIZE": InvalidSizeError,
    "STATE_BUDGET_EXCEEDED": StateBudgetExceededError,
    "INVALID_START": InvalidStartStateError,
    "DIVISIBILITY": DivisibilityError,
    "NOT_PERFECT_SQUARE": NotPerfectSquareError,
    "INVALID_SPEC": InvalidSpecError,
    "LAYOUT_MISMATCH": LayoutMismatchError,
    "ENUMERATION_TOO_LARGE": EnumerationTooLargeError,
    "STALL": StallError,
    "TRANSITION_UNDEFINED": TransitionUndefinedError,
    "STATE_OUT_OF_SPACE": StateOutOfSpaceError,
    "INCOMPLETE_TRACE": IncompleteTraceError,
    "AUTOMATON_FILE": AutomatonFileError,
    "STREAM_FILE": StreamFileError,
}


def raise_error(error_code: str, message: str, details: Optional[dict] = None):
    """Raise an error by error code.

    Args:
        error_code: Error code from ERROR_CODES
        message: Human-readable error message
        details: Optional context dict

    Raises:
        Corresponding exception type

    Example:
        raise_error("DIVISIBILITY", "v1 must divide n", {"n": 8, "v1": 3})
    """
    error_class = ERROR_CODES.get(error_code, Mp2sError)
    raise error_class(message, details)


def exit_code_for(exc: BaseException) -> int:
    """Map an exception onto the CLI exit-code convention.

    2 for usage and input problems, 3 for everything that went wrong while
    running (stalls, undefined transitions, unexpected failures).
    """
    if isinstance(exc, (ValidationError, FormatError)):
        return 2
    return 3
