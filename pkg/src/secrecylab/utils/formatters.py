"""Formatting utilities."""

from typing import Optional, Sequence


def format_duration(seconds: float) -> str:
    """Format a wall time in human-readable form."""
    if seconds < 0:
        return "0s"

    if seconds < 1:
        return f"{seconds * 1000:.0f}ms"

    if seconds < 60:
        return f"{seconds:.1f}s"

    whole = int(seconds)
    minutes = whole // 60
    if minutes < 60:
        remaining_seconds = whole % 60
        if remaining_seconds:
            return f"{minutes}m {remaining_seconds}s"
        return f"{minutes}m"

    hours = minutes // 60
    remaining_minutes = minutes % 60
    if remaining_minutes:
        return f"{hours}h {remaining_minutes}m"
    return f"{hours}h"


def format_sig(value: Optional[float], digits: int = 6) -> str:
    """Format a number with a fixed count of significant digits; None becomes empty."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, int):
        return str(value)
    return f"{value:.{digits}g}"


def format_row(values: Sequence[object], digits: int = 6) -> list:
    """Format a CSV row, leaving strings untouched."""
    return [v if isinstance(v, str) else format_sig(v, digits) for v in values]


def format_bits(bits: Sequence[int]) -> str:
    return "".join(str(int(b)) for b in bits)
