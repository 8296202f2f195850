"""Validation utilities."""

from typing import Optional, Sequence, Tuple

import numpy as np


def validate_probability(p: float, open_interval: bool = True) -> Tuple[bool, Optional[str]]:
    """Validate a probability, by default strictly inside (0, 1)."""
    if not isinstance(p, (int, float, np.floating)) or not np.isfinite(p):
        return False, f"Probability must be a finite number, got {p!r}"
    if open_interval and not 0.0 < p < 1.0:
        return False, f"Probability must lie in (0, 1), got {p}"
    if not open_interval and not 0.0 <= p <= 1.0:
        return False, f"Probability must lie in [0, 1], got {p}"
    return True, None


def validate_wiretap_pair(p_b: float, p_e: float) -> Tuple[bool, Optional[str]]:
    """Validate crossover probabilities of a degraded wiretap BSC pair."""
    for name, p in (("p_b", p_b), ("p_e", p_e)):
        ok, error = validate_probability(p)
        if not ok:
            return False, f"{name}: {error}"
    if p_b >= p_e:
        return False, f"Eve's channel must be noisier than Bob's (p_b={p_b} >= p_e={p_e})"
    if p_e >= 0.5:
        return False, f"p_e must lie below 1/2, got {p_e}"
    return True, None


def validate_blocklength(N: int) -> Tuple[bool, Optional[str]]:
    """Validate that N is a positive power of two."""
    if not isinstance(N, (int, np.integer)) or N < 1:
        return False, f"Block length must be a positive integer, got {N!r}"
    if N & (N - 1):
        return False, f"Block length must be a power of two, got {N}"
    return True, None


def validate_bits(bits: Sequence[int], length: Optional[int] = None) -> Tuple[bool, Optional[str]]:
    """Validate a bit vector and optionally its length."""
    arr = np.asarray(bits)
    if arr.ndim != 1:
        return False, f"Bit vector must be one-dimensional, got shape {arr.shape}"
    if arr.size and not np.all((arr == 0) | (arr == 1)):
        return False, "Bit vector may only contain 0 and 1"
    if length is not None and arr.size != length:
        return False, f"Expected {length} bits, got {arr.size}"
    return True, None


def validate_mu(mu: int) -> Tuple[bool, Optional[str]]:
    if not isinstance(mu, (int, np.integer)) or mu < 2 or mu % 2:
        return False, f"Alphabet budget mu must be an even integer >= 2, got {mu!r}"
    return True, None
