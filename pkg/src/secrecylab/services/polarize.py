"""Bit-channel synthesis with degrading and upgrading alphabet quantization.

Symmetric binary-input channels are handled in pair form: each pair (a, b)
with a >= b stands for the two conjugate outputs (a, b) and (b, a), listed as
(W(y|0), W(y|1)). A self-conjugate output of mass c becomes the pair
(c/2, c/2). Pairs are kept sorted by likelihood ratio r = b/a, ascending.
"""

import hashlib
import heapq
import json
import logging
import math
import time
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.special import xlogy

from ..exceptions import InvalidBudgetError, InvalidChannelError
from ..models.bounds import BitChannelBounds
from ..models.channel import DiscreteChannel
from ..utils.formatters import format_duration
from ..utils.validators import validate_mu
from .dmc import is_symmetric

logger = logging.getLogger(__name__)

Pairs = Tuple[np.ndarray, np.ndarray]

DUPLICATE_RTOL = 1e-12
MAX_EXPONENT = 20


# -- full-matrix synthesis ---------------------------------------------------

def channel_minus(W: DiscreteChannel) -> DiscreteChannel:
    """W^-(y1, y2 | u1) = 1/2 sum_u2 W(y1 | u1 ^ u2) W(y2 | u2)."""
    w0, w1 = _binary_rows(W)
    row0 = 0.5 * (np.outer(w0, w0) + np.outer(w1, w1))
    row1 = 0.5 * (np.outer(w1, w0) + np.outer(w0, w1))
    return DiscreteChannel(trans=np.stack([row0.ravel(), row1.ravel()]))


def channel_plus(W: DiscreteChannel) -> DiscreteChannel:
    """W^+(y1, y2, v1 | v2) = 1/2 W(y1 | v1 ^ v2) W(y2 | v2); outputs ordered (y1, y2, v1)."""
    w0, w1 = _binary_rows(W)
    given0 = np.stack([np.outer(w0, w0), np.outer(w1, w0)], axis=-1)
    given1 = np.stack([np.outer(w1, w1), np.outer(w0, w1)], axis=-1)
    return DiscreteChannel(trans=0.5 * np.stack([given0.ravel(), given1.ravel()]))


def _binary_rows(W: DiscreteChannel) -> Tuple[np.ndarray, np.ndarray]:
    if not W.is_binary():
        raise InvalidChannelError(f"expected a binary-input channel, got {W.inputs} inputs")
    return W.trans[0], W.trans[1]


# -- pair form ---------------------------------------------------------------

def to_pairs(W: DiscreteChannel) -> Pairs:
    perm = is_symmetric(W)
    if perm is None:
        raise InvalidChannelError("channel is not symmetric; merges need conjugate output pairs")
    w0 = W.trans[0]
    labels = np.arange(W.outputs)
    fixed = perm == labels
    first = labels < perm
    a = np.concatenate([w0[fixed] / 2.0, np.maximum(w0[first], w0[perm[first]])])
    b = np.concatenate([w0[fixed] / 2.0, np.minimum(w0[first], w0[perm[first]])])
    return collapse(a, b)


def from_pairs(a: np.ndarray, b: np.ndarray) -> DiscreteChannel:
    trans = np.empty((2, 2 * a.size))
    trans[0, 0::2] = a
    trans[1, 0::2] = b
    trans[0, 1::2] = b
    trans[1, 1::2] = a
    return DiscreteChannel(trans=trans)


def collapse(a: np.ndarray, b: np.ndarray) -> Pairs:
    """Drop empty pairs, sort by ratio and merge pairs with equal ratios; renormalize."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    keep = (a + b) > 0.0
    a, b = a[keep], b[keep]
    if a.size == 0:
        raise InvalidChannelError("channel has no probability mass")
    r = b / a
    order = np.argsort(r, kind="stable")
    a, b, r = a[order], b[order], r[order]
    if a.size > 1:
        breaks = np.diff(r) > DUPLICATE_RTOL * np.maximum(r[1:], 1e-300)
        starts = np.concatenate(([0], np.nonzero(breaks)[0] + 1))
        a = np.add.reduceat(a, starts)
        b = np.add.reduceat(b, starts)
    total = a.sum() + b.sum()
    return a / total, b / total


def minus_pairs(a: np.ndarray, b: np.ndarray) -> Pairs:
    hi = np.outer(a, a) + np.outer(b, b)
    lo = np.outer(a, b) + np.outer(b, a)
    return collapse(hi.ravel(), lo.ravel())


def plus_pairs(a: np.ndarray, b: np.ndarray) -> Pairs:
    cross1 = np.outer(a, b)
    cross2 = np.outer(b, a)
    hi = np.concatenate([np.outer(a, a).ravel(), np.maximum(cross1, cross2).ravel()])
    lo = np.concatenate([np.outer(b, b).ravel(), np.minimum(cross1, cross2).ravel()])
    return collapse(hi, lo)


def pair_capacity(a: np.ndarray, b: np.ndarray) -> float:
    s = a + b
    return float((xlogy(a, 2.0 * a / s) + xlogy(b, 2.0 * b / s)).sum() / np.log(2.0))


def pair_error_prob(a: np.ndarray, b: np.ndarray) -> float:
    return float(b.sum())


def pair_bhattacharyya(a: np.ndarray, b: np.ndarray) -> float:
    return float(2.0 * np.sqrt(a * b).sum())


def _cap(a: float, b: float) -> float:
    s = a + b
    if s <= 0.0:
        return 0.0
    total = 0.0
    if a > 0.0:
        total += a * math.log2(2.0 * a / s)
    if b > 0.0:
        total += b * math.log2(2.0 * b / s)
    return total


# -- greedy merges -----------------------------------------------------------

def degrade_pairs(a: np.ndarray, b: np.ndarray, max_pairs: int) -> Pairs:
    """Merge adjacent pairs with the smallest capacity loss until max_pairs remain."""
    size = a.size
    if size <= max_pairs:
        return a, b
    a = a.astype(float).copy()
    b = b.astype(float).copy()
    nxt = list(range(1, size)) + [-1]
    prev = [-1] + list(range(size - 1))
    alive = [True] * size
    stamp = [0] * size
    caps = [_cap(x, y) for x, y in zip(a.tolist(), b.tolist())]

    def loss(i: int, j: int) -> float:
        return caps[i] + caps[j] - _cap(a[i] + a[j], b[i] + b[j])

    heap = [(loss(i, i + 1), i, 0, 0) for i in range(size - 1)]
    heapq.heapify(heap)
    count = size
    while count > max_pairs:
        _, i, si, sj = heapq.heappop(heap)
        j = nxt[i]
        if not alive[i] or j < 0 or stamp[i] != si or stamp[j] != sj:
            continue
        a[i] += a[j]
        b[i] += b[j]
        caps[i] = _cap(a[i], b[i])
        alive[j] = False
        nxt[i] = nxt[j]
        if nxt[j] >= 0:
            prev[nxt[j]] = i
        stamp[i] += 1
        count -= 1
        p = prev[i]
        if p >= 0:
            heapq.heappush(heap, (loss(p, i), p, stamp[p], stamp[i]))
        if nxt[i] >= 0:
            heapq.heappush(heap, (loss(i, nxt[i]), i, stamp[i], stamp[nxt[i]]))
    keep = np.array(alive)
    return _renormalize(a[keep], b[keep])


def upgrade_pairs(a: np.ndarray, b: np.ndarray, max_pairs: int) -> Pairs:
    """Split middle pairs onto their neighbours' ratios with the smallest capacity gain."""
    size = a.size
    if size <= max_pairs:
        return a, b
    a = a.astype(float).copy()
    b = b.astype(float).copy()
    ratio = (b / a).tolist()
    nxt = list(range(1, size)) + [-1]
    prev = [-1] + list(range(size - 1))
    alive = [True] * size
    stamp = [0] * size

    def split(j: int, p: int, q: int) -> Tuple[float, float, float, float]:
        rp, rq = ratio[p], ratio[q]
        gap = rq - rp
        if gap <= 1e-300:
            return 0.0, 0.0, a[j], b[j]
        dap = min(max((a[j] * rq - b[j]) / gap, 0.0), a[j])
        dbp = min(rp * dap, b[j])
        return dap, dbp, a[j] - dap, b[j] - dbp

    def gain(j: int) -> float:
        p, q = prev[j], nxt[j]
        dap, dbp, daq, dbq = split(j, p, q)
        return (
            _cap(a[p] + dap, b[p] + dbp) + _cap(a[q] + daq, b[q] + dbq)
            - _cap(a[p], b[p]) - _cap(a[q], b[q]) - _cap(a[j], b[j])
        )

    def entry(j: int) -> Tuple[float, int, int, int, int, int, int]:
        p, q = prev[j], nxt[j]
        return gain(j), j, p, q, stamp[p], stamp[j], stamp[q]

    heap = [entry(j) for j in range(1, size - 1)]
    heapq.heapify(heap)
    count = size
    while count > max(max_pairs, 2) and heap:
        _, j, p, q, sp, sj, sq = heapq.heappop(heap)
        # an entry is stale once any of its three pairs changed mass or neighbours
        if (not alive[j] or prev[j] != p or nxt[j] != q
                or stamp[p] != sp or stamp[j] != sj or stamp[q] != sq):
            continue
        dap, dbp, daq, dbq = split(j, p, q)
        a[p] += dap
        b[p] += dbp
        a[q] += daq
        b[q] += dbq
        alive[j] = False
        nxt[p] = q
        prev[q] = p
        stamp[p] += 1
        stamp[q] += 1
        count -= 1
        for m in (prev[p], p, q, nxt[q]):
            if m >= 0 and prev[m] >= 0 and nxt[m] >= 0:
                heapq.heappush(heap, entry(m))
    keep = np.array(alive)
    a, b = a[keep], b[keep]
    if a.size > max_pairs:
        # two pairs left with a budget of one: move all mass to the smaller ratio
        total = a.sum() + b.sum()
        r = b[0] / a[0]
        a = np.array([total / (1.0 + r)])
        b = np.array([total * r / (1.0 + r)])
    return _renormalize(a, b)


def _renormalize(a: np.ndarray, b: np.ndarray) -> Pairs:
    total = a.sum() + b.sum()
    return a / total, b / total


def _check_budget(mu: int) -> None:
    ok, error = validate_mu(mu)
    if not ok:
        raise InvalidBudgetError(error)


def degrading_merge(W: DiscreteChannel, mu: int) -> DiscreteChannel:
    """Degraded version of W with at most mu outputs."""
    _check_budget(mu)
    if W.outputs <= mu:
        return W
    a, b = to_pairs(W)
    return from_pairs(*degrade_pairs(a, b, mu // 2))


def upgrading_merge(W: DiscreteChannel, mu: int) -> DiscreteChannel:
    """Upgraded version of W with at most mu outputs."""
    _check_budget(mu)
    if W.outputs <= mu:
        return W
    a, b = to_pairs(W)
    return from_pairs(*upgrade_pairs(a, b, mu // 2))


# -- construction ------------------------------------------------------------

def _synthesize(pairs: Pairs, n: int, merge, max_pairs: Optional[int]) -> List[Pairs]:
    level = [pairs if max_pairs is None else merge(*pairs, max_pairs)]
    for depth in range(n):
        children: List[Pairs] = []
        for a, b in level:
            for step in (minus_pairs, plus_pairs):
                ca, cb = step(a, b)
                if max_pairs is not None:
                    ca, cb = merge(ca, cb, max_pairs)
                children.append((ca, cb))
        level = children
        logger.debug("synthesized level %d: %d channels, widest %d pairs",
                     depth + 1, len(level), max(x.size for x, _ in level))
    return level


def construct_bounds(W: DiscreteChannel, n: int, mu: int) -> BitChannelBounds:
    """Lower bounds from the degraded recursion and upper bounds from the upgraded one."""
    _check_budget(mu)
    if not 0 <= n <= MAX_EXPONENT:
        raise InvalidChannelError(f"exponent n must lie in 0..{MAX_EXPONENT}, got {n}")
    pairs = to_pairs(W)
    started = time.perf_counter()
    degraded = _synthesize(pairs, n, degrade_pairs, mu // 2)
    upgraded = _synthesize(pairs, n, upgrade_pairs, mu // 2)
    bounds = BitChannelBounds(
        n=n,
        mu=mu,
        capacity_lb=[pair_capacity(a, b) for a, b in degraded],
        error_prob_ub=[pair_error_prob(a, b) for a, b in degraded],
        bhattacharyya_ub=[pair_bhattacharyya(a, b) for a, b in degraded],
        capacity_ub=[pair_capacity(a, b) for a, b in upgraded],
        error_prob_lb=[pair_error_prob(a, b) for a, b in upgraded],
        channel=W,
    )
    logger.info("constructed bounds N=%d mu=%d in %s", 1 << n, mu,
                format_duration(time.perf_counter() - started))
    return bounds


def exact_capacities(W: DiscreteChannel, n: int) -> np.ndarray:
    """Bit-channel capacities from merge-free synthesis (only lossless duplicate collapse)."""
    level = _synthesize(to_pairs(W), n, degrade_pairs, None)
    return np.array([pair_capacity(a, b) for a, b in level])


def ordering_agreement(bounds: BitChannelBounds) -> Tuple[float, List[int]]:
    """Share of ranks where ordering by capacity_lb and by capacity_ub pick the same index."""
    idx = np.arange(bounds.N)
    by_lb = np.lexsort((idx, -bounds.capacity_lb))
    by_ub = np.lexsort((idx, -bounds.capacity_ub))
    mismatches = np.nonzero(by_lb != by_ub)[0]
    return 1.0 - mismatches.size / bounds.N, mismatches.tolist()


class BoundsService:
    """Constructs bit-channel bounds and caches them in memory and on disk."""

    def __init__(self, cache_dir: Optional[Path] = None):
        self.cache_dir = Path(cache_dir) if cache_dir is not None else None
        self._bounds: Dict[str, BitChannelBounds] = {}

    @staticmethod
    def cache_key(W: DiscreteChannel, n: int, mu: int) -> str:
        payload = json.dumps({"channel": W.to_json_dict(), "n": n, "mu": mu}, sort_keys=True)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:32]

    def _path(self, key: str) -> Optional[Path]:
        if self.cache_dir is None:
            return None
        return self.cache_dir / f"bounds-{key}.json"

    def get_bounds(self, W: DiscreteChannel, n: int, mu: int) -> BitChannelBounds:
        """Get bounds for (W, n, mu), constructing them on a cache miss."""
        key = self.cache_key(W, n, mu)
        if key in self._bounds:
            return self._bounds[key]

        path = self._path(key)
        if path is not None and path.exists():
            try:
                bounds = BitChannelBounds.from_json_dict(json.loads(path.read_text()))
                logger.debug("loaded bounds from %s", path)
                self._bounds[key] = bounds
                return bounds
            except (ValueError, KeyError) as exc:
                logger.warning("ignoring unreadable bounds cache %s: %s", path, exc)

        bounds = construct_bounds(W, n, mu)
        self._bounds[key] = bounds
        if path is not None:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(json.dumps(bounds.to_json_dict()))
        return bounds

    def cached_count(self) -> int:
        return len(self._bounds)

    def clear(self) -> int:
        """Drop in-memory entries; disk files stay."""
        count = len(self._bounds)
        self._bounds = {}
        return count
