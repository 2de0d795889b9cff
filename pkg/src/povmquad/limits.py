"""Resource guards for operations with exponential scaling.

Both limits can be raised or lowered through environment variables so
batch jobs can opt into bigger computations without code changes.
"""

from __future__ import annotations

import os

from .errors import InputFormatError

# Largest full-space dimension d**M for dense tensor-product operators.
FULL_SPACE_GUARD_ENV = "POVMQUAD_FULL_SPACE_GUARD"
DEFAULT_FULL_SPACE_GUARD = 4096

# Largest A * d_N**2 work estimate for grid construction/certification.
BUILD_GUARD_ENV = "POVMQUAD_BUILD_GUARD"
DEFAULT_BUILD_GUARD = 50_000_000


def _read_guard(env_name: str, default: int) -> int:
    raw = os.environ.get(env_name)
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError as exc:
        raise InputFormatError(f"{env_name} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise InputFormatError(f"{env_name} must be positive, got {value}")
    return value


def full_space_guard() -> int:
    """Maximum full tensor-product dimension d**M allowed."""
    return _read_guard(FULL_SPACE_GUARD_ENV, DEFAULT_FULL_SPACE_GUARD)


def build_guard() -> int:
    """Maximum A * d_N**2 construction cost allowed for grid builds."""
    return _read_guard(BUILD_GUARD_ENV, DEFAULT_BUILD_GUARD)
