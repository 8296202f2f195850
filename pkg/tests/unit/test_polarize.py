"""Tests for bit-channel synthesis, merges and bound construction."""

import json

import numpy as np
import pytest

from secrecylab.exceptions import InvalidBudgetError, InvalidChannelError
from secrecylab.models.bounds import BitChannelBounds
from secrecylab.services.dmc import bsc, capacity, error_probability
from secrecylab.services.polarize import (
    BoundsService,
    channel_minus,
    channel_plus,
    construct_bounds,
    degrade_pairs,
    degrading_merge,
    exact_capacities,
    minus_pairs,
    ordering_agreement,
    pair_capacity,
    plus_pairs,
    to_pairs,
    upgrade_pairs,
    upgrading_merge,
)


@pytest.fixture
def wide_pairs():
    """Pair form of BSC(0.11)^{++-}, which has many distinct ratios."""
    a, b = to_pairs(bsc(0.11))
    a, b = plus_pairs(a, b)
    a, b = plus_pairs(a, b)
    return minus_pairs(a, b)


@pytest.fixture
def random_pairs(rng):
    """Forty pairs with distinct random ratios in (0, 1)."""
    ratios = np.sort(rng.uniform(0.01, 0.99, size=40))
    mass = rng.uniform(0.5, 1.5, size=40)
    a = mass / (1.0 + ratios)
    b = mass * ratios / (1.0 + ratios)
    total = a.sum() + b.sum()
    return a / total, b / total


def reference_upgrade(a, b, max_pairs):
    """Greedy upgrade recomputing every gain at every step."""
    a = list(a)
    b = list(b)

    def cap(x, y):
        return pair_capacity(np.array([x]), np.array([y]))

    while len(a) > max_pairs:
        best = None
        for j in range(1, len(a) - 1):
            rp, rq = b[j - 1] / a[j - 1], b[j + 1] / a[j + 1]
            dap = min(max((a[j] * rq - b[j]) / (rq - rp), 0.0), a[j])
            dbp = min(rp * dap, b[j])
            moved = (dap, dbp, a[j] - dap, b[j] - dbp)
            gain = (cap(a[j - 1] + moved[0], b[j - 1] + moved[1]) + cap(a[j + 1] + moved[2], b[j + 1] + moved[3])
                    - cap(a[j - 1], b[j - 1]) - cap(a[j + 1], b[j + 1]) - cap(a[j], b[j]))
            if best is None or gain < best[0]:
                best = (gain, j, moved)
        _, j, moved = best
        a[j - 1] += moved[0]
        b[j - 1] += moved[1]
        a[j + 1] += moved[2]
        b[j + 1] += moved[3]
        del a[j], b[j]
    a = np.array(a)
    b = np.array(b)
    total = a.sum() + b.sum()
    return a / total, b / total

class TestSynthesis:
    """Test one polarization step."""

    def test_minus_capacity(self, bsc05):
        """Test C(W^-) for BSC(0.05)."""
        assert capacity(channel_minus(bsc05)) == pytest.approx(0.547058, abs=1e-6)

    def test_plus_capacity(self, bsc05):
        """Test C(W^+) for BSC(0.05)."""
        assert capacity(channel_plus(bsc05)) == pytest.approx(0.880148, abs=1e-6)

    @pytest.mark.parametrize("p", [0.01, 0.05, 0.2, 0.4])
    def test_capacity_conservation(self, p):
        """Test C(W^-) + C(W^+) = 2 C(W)."""
        W = bsc(p)
        total = capacity(channel_minus(W)) + capacity(channel_plus(W))
        assert total == pytest.approx(2 * capacity(W), abs=1e-9)

    def test_conservation_on_asymmetric_channel(self, asymmetric_channel):
        """Test conservation does not need symmetry."""
        W = asymmetric_channel
        total = capacity(channel_minus(W)) + capacity(channel_plus(W))
        assert total == pytest.approx(2 * capacity(W), abs=1e-9)

    def test_alphabet_sizes(self, bsc05):
        """Test |Y|^2 outputs for W^- and 2|Y|^2 for W^+."""
        assert channel_minus(bsc05).outputs == 4
        assert channel_plus(bsc05).outputs == 8

    def test_pair_form_agrees_with_matrix(self, bsc05):
        """Test the pair recursion against full-matrix synthesis."""
        a, b = to_pairs(bsc05)
        assert exact_capacities(bsc05, 1) == pytest.approx([
            capacity(channel_minus(bsc05)), capacity(channel_plus(bsc05)),
        ], abs=1e-12)
        ma, mb = minus_pairs(a, b)
        assert ma.sum() + mb.sum() == pytest.approx(1.0)
        assert mb.sum() == pytest.approx(error_probability(channel_minus(bsc05)))

    def test_pair_form_needs_symmetry(self, asymmetric_channel):
        """Test rejecting channels without conjugate outputs."""
        with pytest.raises(InvalidChannelError):
            to_pairs(asymmetric_channel)


class TestMerges:
    """Test degrading and upgrading merges."""

    def test_small_channel_unchanged(self, bsc05):
        """Test that channels within budget come back as they are."""
        assert degrading_merge(bsc05, 2) is bsc05
        assert upgrading_merge(bsc05, 2) is bsc05

    @pytest.mark.parametrize("mu", [0, 3, 5, -2])
    def test_invalid_budget(self, bsc05, mu):
        """Test rejecting odd or non-positive mu."""
        with pytest.raises(InvalidBudgetError):
            degrading_merge(bsc05, mu)
        with pytest.raises(InvalidBudgetError):
            construct_bounds(bsc05, 2, mu)

    @pytest.mark.parametrize("mu", [2, 4, 6, 8])
    def test_merges_sandwich_exact_capacity(self, mu):
        """Test C(degraded) <= C(W) <= C(upgraded) within budget."""
        W = channel_plus(channel_plus(bsc(0.11)))
        low = degrading_merge(W, mu)
        high = upgrading_merge(W, mu)
        assert low.outputs <= mu
        assert high.outputs <= mu
        assert capacity(low) <= capacity(W) + 1e-12
        assert capacity(high) >= capacity(W) - 1e-12

    def test_merges_bracket_error_probability(self):
        """Test Pe(upgraded) <= Pe(W) <= Pe(degraded)."""
        W = channel_plus(channel_minus(bsc(0.08)))
        assert error_probability(upgrading_merge(W, 4)) <= error_probability(W) + 1e-12
        assert error_probability(degrading_merge(W, 4)) >= error_probability(W) - 1e-12

    def test_degrade_monotone_in_budget(self, wide_pairs):
        """Test that a larger budget never lowers the degraded capacity."""
        a, b = wide_pairs
        caps = [pair_capacity(*degrade_pairs(a, b, m)) for m in (1, 2, 3, 4, 6, 8)]
        assert all(x <= y + 1e-12 for x, y in zip(caps, caps[1:]))

    def test_upgrade_monotone_in_budget(self, wide_pairs):
        """Test that a larger budget never raises the upgraded capacity."""
        a, b = wide_pairs
        caps = [pair_capacity(*upgrade_pairs(a, b, m)) for m in (1, 2, 3, 4, 6, 8)]
        assert all(x >= y - 1e-12 for x, y in zip(caps, caps[1:]))

    @pytest.mark.parametrize("max_pairs", [2, 3, 5, 8, 16])
    def test_upgrade_follows_fresh_greedy_order(self, random_pairs, max_pairs):
        """Test the heap-driven upgrade matches a greedy pass that recomputes every gain."""
        a, b = random_pairs
        ua, ub = upgrade_pairs(a, b, max_pairs)
        ra, rb = reference_upgrade(a, b, max_pairs)
        assert ua.size == ra.size == max_pairs
        assert np.allclose(ua, ra, atol=1e-12)
        assert np.allclose(ub, rb, atol=1e-12)

    def test_merged_pairs_stay_normalized(self, wide_pairs):
        """Test total mass and ratio order after merging."""
        a, b = wide_pairs
        for merge in (degrade_pairs, upgrade_pairs):
            ma, mb = merge(a, b, 3)
            assert ma.sum() + mb.sum() == pytest.approx(1.0)
            assert np.all(np.diff(mb / ma) >= -1e-12)


class TestConstructBounds:
    """Test bound construction."""

    def test_budget_tightens_bounds(self):
        """Test each index's bounds tighten as mu doubles from 8 to 64."""
        bounds = [construct_bounds(bsc(0.11), 5, mu) for mu in (8, 16, 32, 64)]
        for coarse, fine in zip(bounds, bounds[1:]):
            assert np.all(fine.capacity_lb >= coarse.capacity_lb - 1e-6)
            assert np.all(fine.capacity_ub <= coarse.capacity_ub + 1e-6)
        assert np.all(bounds[-1].capacity_ub - bounds[-1].capacity_lb
                      <= bounds[0].capacity_ub - bounds[0].capacity_lb + 1e-9)

    def test_single_channel(self, bsc05):
        """Test that N=1 bounds are the channel itself."""
        bounds = construct_bounds(bsc05, 0, 64)
        assert bounds.capacity_lb[0] == pytest.approx(0.713603, abs=1e-6)
        assert bounds.capacity_ub[0] == pytest.approx(0.713603, abs=1e-6)
        assert bounds.error_prob_ub[0] == pytest.approx(0.05)

    def test_two_channels(self, bsc05):
        """Test N=2 bounds are exact under a generous budget."""
        bounds = construct_bounds(bsc05, 1, 64)
        assert bounds.capacity_lb == pytest.approx([0.547058, 0.880148], abs=1e-6)
        assert bounds.capacity_ub == pytest.approx(bounds.capacity_lb, abs=1e-12)

    @pytest.mark.parametrize("p,mu", [(0.05, 4), (0.05, 8), (0.3, 8), (0.11, 16)])
    def test_bounds_sandwich_exact(self, p, mu):
        """Test lb <= exact <= ub per index at N=16."""
        W = bsc(p)
        bounds = construct_bounds(W, 4, mu)
        exact = exact_capacities(W, 4)
        assert np.all(bounds.capacity_lb <= exact + 1e-9)
        assert np.all(exact <= bounds.capacity_ub + 1e-9)
        assert bounds.is_ordered()
        assert np.all(bounds.error_prob_lb <= bounds.error_prob_ub + 1e-12)

    def test_total_capacity_sandwich(self, small_bob_bounds):
        """Test sum(lb) <= N C(W) <= sum(ub)."""
        total = 16 * 0.713603
        assert small_bob_bounds.capacity_lb.sum() <= total + 1e-5
        assert small_bob_bounds.capacity_ub.sum() >= total - 1e-5

    def test_exact_conservation(self, bsc05):
        """Test sum of exact capacities equals N C(W)."""
        assert exact_capacities(bsc05, 3).sum() == pytest.approx(8 * capacity(bsc05), abs=1e-9)

    def test_natural_index_order(self, bsc05):
        """Test index 0 is the all-minus channel and N-1 the all-plus one."""
        exact = exact_capacities(bsc05, 3)
        assert exact.argmin() == 0
        assert exact.argmax() == 7

    def test_exponent_range(self, bsc05):
        """Test rejecting exponents outside the supported range."""
        with pytest.raises(InvalidChannelError):
            construct_bounds(bsc05, 21, 8)

    def test_ordering_agreement(self, small_bob_bounds):
        """Test the agreement share is a fraction with matching mismatches."""
        share, mismatches = ordering_agreement(small_bob_bounds)
        assert 0.0 <= share <= 1.0
        assert share == pytest.approx(1.0 - len(mismatches) / 16)

    def test_json_round_trip(self, small_bob_bounds):
        """Test the cache format keeps every field."""
        data = json.loads(json.dumps(small_bob_bounds.to_json_dict()))
        loaded = BitChannelBounds.from_json_dict(data)
        assert np.allclose(loaded.capacity_lb, small_bob_bounds.capacity_lb)
        assert np.allclose(loaded.error_prob_lb, small_bob_bounds.error_prob_lb)
        assert loaded.channel is not None


class TestBoundsService:
    """Test the bounds cache."""

    def test_memory_cache(self, bounds_service, bsc05):
        """Test the second lookup returns the same object."""
        first = bounds_service.get_bounds(bsc05, 3, 8)
        second = bounds_service.get_bounds(bsc05, 3, 8)
        assert first is second
        assert bounds_service.cached_count() == 1

    def test_disk_cache(self, tmp_path, bsc05):
        """Test a fresh service reloads from disk."""
        BoundsService(tmp_path).get_bounds(bsc05, 3, 8)
        assert len(list(tmp_path.glob("bounds-*.json"))) == 1
        reloaded = BoundsService(tmp_path).get_bounds(bsc05, 3, 8)
        assert np.allclose(reloaded.capacity_ub, construct_bounds(bsc05, 3, 8).capacity_ub)

    def test_corrupt_cache_file(self, tmp_path, bsc05):
        """Test an unreadable cache entry is rebuilt."""
        key = BoundsService.cache_key(bsc05, 2, 8)
        (tmp_path / f"bounds-{key}.json").write_text('{"n": 2}')
        bounds = BoundsService(tmp_path).get_bounds(bsc05, 2, 8)
        assert bounds.N == 4

    def test_key_depends_on_budget(self, bsc05):
        """Test different mu values do not share entries."""
        assert BoundsService.cache_key(bsc05, 3, 8) != BoundsService.cache_key(bsc05, 3, 16)

    def test_clear(self, bounds_service, bsc05):
        """Test dropping in-memory entries."""
        bounds_service.get_bounds(bsc05, 2, 8)
        assert bounds_service.clear() == 1
        assert bounds_service.cached_count() == 0

    def test_no_cache_dir(self, bsc05):
        """Test a memory-only service."""
        service = BoundsService()
        assert service.get_bounds(bsc05, 1, 8).N == 2
