"""Input validation utilities for mp2s-lab.

Reusable checks for automaton parameters, instance sizes, block counts and
index sets. All functions raise exceptions from src.utils.errors when
validation fails.

Usage:
    from src.utils.validation import validate_positive_int, validate_divides

    def partition_blocks(n: int, v1: int):
        validate_positive_int(v1, "v1")
        validate_divides(v1, n, "v1")
"""

from __future__ import annotations

import math
from typing import Iterable, Type

from src.utils.errors import (
    DivisibilityError,
    InvalidParameterError,
    NotPerfectSquareError,
)


# === Numeric Validators ===

def validate_positive_int(
    value: int,
    param_name: str,
    error_cls: Type[InvalidParameterError] = InvalidParameterError,
) -> None:
    """Validate that value is a positive integer.

    Args:
        value: Value to check
        param_name: Parameter name for error message
        error_cls: Exception class to raise (e.g. InvalidSizeError for n)

    Raises:
        InvalidParameterError: If value is not a positive integer

    Example:
        validate_positive_int(m, "m")
    """
    if not isinstance(value, int) or isinstance(value, bool):
        raise error_cls(
            f"{param_name} must be an integer",
            details={"parameter": param_name, "value": value, "type": type(value).__name__}
        )

    if value <= 0:
        raise error_cls(
            f"{param_name} must be positive",
            details={"parameter": param_name, "value": value, "constraint": "> 0"}
        )


def validate_non_negative_int(value: int, param_name: str) -> None:
    """Validate that value is a non-negative integer (>= 0).

    Args:
        value: Value to check
        param_name: Parameter name for error message

    Raises:
        InvalidParameterError: If value is not a non-negative integer
    """
    if not isinstance(value, int) or isinstance(value, bool):
        raise InvalidParameterError(
            f"{param_name} must be an integer",
            details={"parameter": param_name, "value": value, "type": type(value).__name__}
        )

    if value < 0:
        raise InvalidParameterError(
            f"{param_name} must be non-negative",
            details={"parameter": param_name, "value": value, "constraint": ">= 0"}
        )


def validate_divides(divisor: int, n: int, param_name: str) -> None:
    """Validate that divisor splits {1..n} into equal-size parts.

    Raises:
        DivisibilityError: If divisor does not divide n

    Example:
        validate_divides(v1, n, "v1")
    """
    if n % divisor != 0:
        raise DivisibilityError(
            f"{param_name} must divide n",
            details={"parameter": param_name, "value": divisor, "n": n}
        )


def validate_perfect_square(n: int, param_name: str = "n") -> int:
    """Validate that n is a perfect square and return its root.

    Raises:
        NotPerfectSquareError: If n is not a perfect square
    """
    root = math.isqrt(n)
    if root * root != n:
        raise NotPerfectSquareError(
            f"{param_name} must be a perfect square",
            details={"parameter": param_name, "value": n, "floor_root": root}
        )
    return root


# === Collection Validators ===

def validate_index_members(members: Iterable[int], n: int, param_name: str) -> None:
    """Validate that every index lies in {1..n}.

    Raises:
        InvalidParameterError: If some member is out of range
    """
    for i in members:
        if not isinstance(i, int) or not (1 <= i <= n):
            raise InvalidParameterError(
                f"{param_name} contains an index outside 1..{n}",
                details={"parameter": param_name, "index": i, "valid_range": f"[1, {n}]"}
            )
