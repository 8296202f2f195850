"""Coset wiretap coding: index-set design, randomized encoding and secrecy bounds."""

import logging
import math
from typing import Optional, Sequence, Tuple

import numpy as np

from ..exceptions import InfeasibleDesignError, InvalidCodeError, InvalidConfigError, SecrecyLabError
from ..models.bounds import BitChannelBounds
from ..models.code import CodeKind, GeneratorPoly
from ..models.design import SecrecyDesign, SecrecyReport
from ..utils.validators import validate_bits
from .codes import encode_u
from .dmc import secrecy_capacity

logger = logging.getLogger(__name__)


def coset_encode(
    design: SecrecyDesign,
    msg: Sequence[int],
    rng: Optional[np.random.Generator] = None,
    random_bits: Optional[Sequence[int]] = None,
) -> np.ndarray:
    """V_A = msg, V_R = uniform bits, V_B = 0, then encode."""
    ok, error = validate_bits(msg, design.k)
    if not ok:
        raise InvalidCodeError(f"message: {error}")
    msg = np.asarray(msg, dtype=np.uint8)
    if random_bits is None:
        if rng is None:
            raise InvalidConfigError("coset_encode needs an rng or explicit random bits")
        random_bits = rng.integers(0, 2, size=design.r, dtype=np.uint8)
    ok, error = validate_bits(random_bits, design.r)
    if not ok:
        raise InvalidCodeError(f"random bits: {error}")
    random_bits = np.asarray(random_bits, dtype=np.uint8)
    u = np.zeros(design.N, dtype=np.uint8)
    u[list(design.A)] = msg
    u[list(design.R)] = random_bits
    return encode_u(design.code_spec(), u)


def leakage_bound(design: SecrecyDesign) -> float:
    """Sum of Eve's bit-channel capacity upper bounds outside R."""
    if design.eve_bounds is None:
        raise InvalidConfigError("design carries no bounds for Eve's channel")
    outside = np.ones(design.N, dtype=bool)
    outside[list(design.R)] = False
    return float(design.eve_bounds.capacity_ub[outside].sum())


def semantic_bound(leakage: float) -> float:
    """delta = sqrt(2 I)."""
    if leakage < 0:
        raise SecrecyLabError(f"leakage must be non-negative, got {leakage}")
    return math.sqrt(2.0 * leakage)


def secrecy_bits(delta: float) -> Optional[float]:
    """-log2(delta) when 0 < delta < 1."""
    if 0.0 < delta < 1.0:
        return -math.log2(delta)
    return None


def round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def _ranked(values: np.ndarray) -> np.ndarray:
    """Indices by descending value, ties to the lower index."""
    idx = np.arange(values.size)
    return np.lexsort((idx, -values))


def max_unfrozen_by_union_bound(bob_bounds: BitChannelBounds, budget: float) -> int:
    """Largest u such that Bob's u most reliable indices have sum(error_prob_ub) <= budget."""
    order = _ranked(bob_bounds.capacity_lb)
    cumulative = np.cumsum(bob_bounds.error_prob_ub[order])
    return int(np.searchsorted(cumulative, budget, side="right"))


def design_sets(
    bob_bounds: BitChannelBounds,
    eve_bounds: BitChannelBounds,
    k_target: Optional[int] = None,
    bob_fer_budget: Tuple[float, float] = (0.05, 0.06),
    eve_threshold: float = 1e-3,
    max_unfrozen: Optional[int] = None,
    random_size: Optional[int] = None,
    secure_span: Optional[int] = None,
    kind: CodeKind = CodeKind.POLAR,
    g: Optional[GeneratorPoly] = None,
) -> SecrecyDesign:
    """Choose (A, R, B).

    R takes Eve's highest capacity_ub indices above eve_threshold, stopping
    where Bob's unfrozen budget would be exceeded. A takes the k_target best
    remaining indices for Bob. The budget is max_unfrozen when given
    (a simulation-calibrated size), otherwise the union bound over A and R
    must stay at or below the upper end of bob_fer_budget.

    With secure_span and k_target, the Eve-ranked part of R holds at most
    secure_span - k_target indices and the rest of the unfrozen budget is
    filled with random bits on Bob's next best indices after A.
    """
    if bob_bounds.N != eve_bounds.N:
        raise InvalidConfigError(f"bounds disagree on N: {bob_bounds.N} vs {eve_bounds.N}")
    N = bob_bounds.N
    lo, hi = bob_fer_budget
    if not 0.0 <= lo <= hi:
        raise InvalidConfigError(f"invalid FER window {bob_fer_budget}")
    union_checked = max_unfrozen is None
    limit = max_unfrozen_by_union_bound(bob_bounds, hi) if union_checked else max_unfrozen
    if not 0 <= limit <= N:
        raise InvalidConfigError(f"max_unfrozen must lie in 0..{N}, got {limit}")

    eve_order = _ranked(eve_bounds.capacity_ub)
    if random_size is not None:
        if not 0 <= random_size <= N:
            raise InvalidConfigError(f"random_size must lie in 0..{N}, got {random_size}")
        candidates = eve_order
    else:
        candidates = eve_order[eve_bounds.capacity_ub[eve_order] > eve_threshold]
    bob_order = _ranked(bob_bounds.capacity_lb)

    def fill(r: int, k: Optional[int], padding: int = 0) -> Tuple[np.ndarray, np.ndarray]:
        R = candidates[:r]
        taken = np.zeros(N, dtype=bool)
        taken[R] = True
        rest = bob_order[~taken[bob_order]]
        if k is not None:
            return rest[:k], np.concatenate([R, rest[k:k + padding]])
        room = max(limit - r, 0)
        A = rest[:room]
        if union_checked:
            base = bob_bounds.error_prob_ub[R].sum()
            within = base + np.cumsum(bob_bounds.error_prob_ub[A]) <= hi
            A = A[: int(np.count_nonzero(within))]
        return A, R

    def fits(A: np.ndarray, R: np.ndarray) -> bool:
        if not union_checked:
            return True
        return float(bob_bounds.error_prob_ub[np.concatenate([A, R])].sum()) <= hi

    if k_target is not None:
        if not 0 <= k_target <= N:
            raise InvalidConfigError(f"k_target must lie in 0..{N}, got {k_target}")
        if k_target > limit:
            raise InfeasibleDesignError(
                f"k={k_target} exceeds the {limit} indices Bob can carry within FER budget {hi}"
            )
        if random_size is not None and secure_span is not None:
            raise InvalidConfigError("random_size and secure_span are exclusive")
        padding = 0
        if secure_span is not None:
            if not k_target <= secure_span <= N:
                raise InvalidConfigError(f"secure_span must lie in {k_target}..{N}, got {secure_span}")
            r = min(len(candidates), min(secure_span, limit) - k_target)
            padding = limit - k_target - r
        elif random_size is not None:
            r = random_size
            if k_target + r > N:
                raise InfeasibleDesignError(f"k={k_target} and r={r} exceed N={N}")
        else:
            r = min(len(candidates), limit - k_target)
        while True:
            A, R = fill(r, k_target, padding)
            if fits(A, R):
                break
            if r == 0 or random_size is not None or secure_span is not None:
                raise InfeasibleDesignError(
                    f"no random set keeps Bob's union bound within {hi} at k={k_target}"
                )
            r -= 1
    else:
        r = len(candidates) if random_size is None else random_size
        A, R = fill(r, None)
        if A.size == 0:
            raise InfeasibleDesignError(
                f"no information index fits Bob's budget (limit {limit}, window upper end {hi})"
            )

    used = np.zeros(N, dtype=bool)
    used[A] = True
    used[R] = True
    design = SecrecyDesign(
        N=N,
        A=A.tolist(),
        R=R.tolist(),
        B=np.nonzero(~used)[0].tolist(),
        kind=kind,
        g=g,
        eve_bounds=eve_bounds,
        bob_bounds=bob_bounds,
    )
    logger.info("designed N=%d k=%d r=%d (limit %d)", N, design.k, design.r, limit)
    return design


def bob_union_bound(design: SecrecyDesign) -> float:
    if design.bob_bounds is None:
        raise InvalidConfigError("design carries no bounds for Bob's channel")
    return float(design.bob_bounds.error_prob_ub[list(design.unfrozen)].sum())


def secrecy_report(design: SecrecyDesign, p_b: float, p_e: float) -> SecrecyReport:
    """Leakage, semantic-secrecy and rate figures of a design."""
    leakage = leakage_bound(design)
    delta = semantic_bound(leakage)
    return SecrecyReport(
        N=design.N,
        pe=p_e,
        k=design.k,
        leakage_ub=leakage,
        secrecy_capacity=secrecy_capacity(p_b, p_e),
        rate=design.k / design.N,
        effective_rate=(design.k - leakage) / design.N,
        delta_raw=delta,
        delta_rounded=round_half_up(delta),
    )
