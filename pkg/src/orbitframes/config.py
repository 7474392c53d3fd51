"""Environment-driven limits."""

from __future__ import annotations

import os

#: Hard ceiling on any truncation window when the env var is unset.
DEFAULT_MAX_TRUNC = 16384


def max_truncation() -> int:
    """Truncation ceiling, overridable via ``ORBITFRAMES_MAX_TRUNC``."""
    raw = os.environ.get("ORBITFRAMES_MAX_TRUNC", "")
    if not raw:
        return DEFAULT_MAX_TRUNC
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(
            f"ORBITFRAMES_MAX_TRUNC must be an integer, got {raw!r}"
        ) from exc
    if value < 1:
        raise ValueError(f"ORBITFRAMES_MAX_TRUNC must be positive, got {value}")
    return value
