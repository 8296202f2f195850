"""Binary-input discrete memoryless channels and their information measures."""

import logging
from typing import Optional

import numpy as np
from scipy.special import entr, rel_entr

from ..exceptions import InvalidChannelError
from ..models.channel import ChannelMetrics, DiscreteChannel
from ..utils.validators import validate_probability, validate_wiretap_pair

logger = logging.getLogger(__name__)

LN2 = np.log(2.0)


def bsc(p: float) -> DiscreteChannel:
    """Binary symmetric channel with crossover probability p."""
    ok, error = validate_probability(p)
    if not ok:
        raise InvalidChannelError(error)
    return DiscreteChannel(trans=[[1.0 - p, p], [p, 1.0 - p]])


def binary_entropy(p: float) -> float:
    """h2(p) in bits, with 0 log 0 = 0."""
    ok, error = validate_probability(p, open_interval=False)
    if not ok:
        raise InvalidChannelError(error)
    return float((entr(p) + entr(1.0 - p)) / LN2)


def mutual_information(trans: np.ndarray, prior: Optional[np.ndarray] = None) -> float:
    """I(X;Y) in bits for a q x |Y| transition matrix and an input prior (uniform by default)."""
    trans = np.asarray(trans, dtype=float)
    q = trans.shape[0]
    if prior is None:
        prior = np.full(q, 1.0 / q)
    prior = np.asarray(prior, dtype=float)
    if prior.shape != (q,):
        raise InvalidChannelError(f"prior must have {q} entries")
    support = prior > 0
    rows = trans[support]
    weights = prior[support]
    py = weights @ rows
    info = (weights[:, None] * rel_entr(rows, py[None, :])).sum() / LN2
    return float(max(info, 0.0))


def capacity(W: DiscreteChannel) -> float:
    """Symmetric capacity: I(X;Y) under a uniform input."""
    return mutual_information(W.trans)


def bhattacharyya(W: DiscreteChannel) -> float:
    _require_binary(W)
    return float(np.sqrt(W.trans[0] * W.trans[1]).sum())


def error_probability(W: DiscreteChannel) -> float:
    """ML bit-error probability under a uniform input."""
    _require_binary(W)
    return float(0.5 * np.minimum(W.trans[0], W.trans[1]).sum())


def channel_metrics(W: DiscreteChannel) -> ChannelMetrics:
    return ChannelMetrics(
        capacity=capacity(W),
        bhattacharyya=bhattacharyya(W),
        error_prob=error_probability(W),
    )


def secrecy_capacity(p_b: float, p_e: float) -> float:
    """C_s = h2(p_e) - h2(p_b) of the degraded wiretap BSC."""
    ok, error = validate_wiretap_pair(p_b, p_e)
    if not ok:
        raise InvalidChannelError(error)
    return binary_entropy(p_e) - binary_entropy(p_b)


def symmetry_permutation(row0: np.ndarray, row1: np.ndarray, tol: float = 1e-9) -> Optional[np.ndarray]:
    """Involution pi with row0[y] = row1[pi(y)], or None.

    tol is relative to the largest entry of the two rows.
    """
    row0 = np.asarray(row0, dtype=float)
    row1 = np.asarray(row1, dtype=float)
    if row0.shape != row1.shape:
        return None
    size = row0.shape[0]
    scale = max(float(row0.max(initial=0.0)), float(row1.max(initial=0.0)), 1e-300)
    atol = tol * scale
    perm = np.full(size, -1, dtype=np.int64)

    self_paired = np.abs(row0 - row1) <= atol
    perm[self_paired] = np.nonzero(self_paired)[0]

    # remaining outputs must pair up as (a, b) <-> (b, a)
    for y in np.nonzero(~self_paired)[0]:
        if perm[y] >= 0:
            continue
        free = perm < 0
        free[y] = False
        match = free & (np.abs(row1 - row0[y]) <= atol) & (np.abs(row0 - row1[y]) <= atol)
        candidates = np.nonzero(match)[0]
        if candidates.size == 0:
            return None
        z = candidates[0]
        perm[y] = z
        perm[z] = y
    return perm


def is_symmetric(W: DiscreteChannel, tol: float = 1e-9) -> Optional[np.ndarray]:
    """Output permutation pi with W(y|0) = W(pi(y)|1), or None if the channel is not symmetric."""
    _require_binary(W)
    return symmetry_permutation(W.trans[0], W.trans[1], tol)


def _require_binary(W: DiscreteChannel) -> None:
    if not W.is_binary():
        raise InvalidChannelError(f"expected a binary-input channel, got {W.inputs} inputs")
