"""Input validation helpers shared by the public functions and estimators."""

from __future__ import annotations

import math
import numbers

from .exceptions import DomainError


def check_positive(value, name="value"):
    """Return ``value`` as a float, raising DomainError unless finite and > 0."""
    try:
        x = float(value)
    except (TypeError, ValueError):
        raise DomainError(f"{name} must be a real number, got {value!r}") from None
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"{name} must be positive and finite, got {value!r}")
    return x


def check_real(value, name="value"):
    try:
        x = float(value)
    except (TypeError, ValueError):
        raise DomainError(f"{name} must be a real number, got {value!r}") from None
    if not math.isfinite(x):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return x


def check_int(value, name="value", minimum=None):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise DomainError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if minimum is not None and value < minimum:
        raise DomainError(f"{name} must be >= {minimum}, got {value}")
    return value


def check_genus(g):
    return check_int(g, "genus", minimum=2)
