"""Process-wide numeric settings.

The probability tolerance is a single source of truth for normalization
checks, equality checks and deviation strictness. Library callers do not
pass it per call; the CLI overrides it with ``--tolerance``.
"""

DEFAULT_TOLERANCE = 1e-9
DEFAULT_MAX_PROFILES = 10**6

_tolerance = DEFAULT_TOLERANCE


def tolerance() -> float:
    return _tolerance


def set_tolerance(value: float) -> None:
    global _tolerance
    if not value > 0:
        raise ValueError(f"tolerance must be positive, got {value!r}")
    _tolerance = float(value)
