"""Utility functions for secrecylab."""

from .validators import (
    validate_probability,
    validate_wiretap_pair,
    validate_blocklength,
    validate_bits,
    validate_mu,
)
from .formatters import format_duration, format_sig, format_row, format_bits
from .rng import derive_key, frame_generator, random_bits

__all__ = [
    "validate_probability", "validate_wiretap_pair", "validate_blocklength",
    "validate_bits", "validate_mu",
    "format_duration", "format_sig", "format_row", "format_bits",
    "derive_key", "frame_generator", "random_bits",
]
