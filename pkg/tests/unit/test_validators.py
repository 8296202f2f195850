"""Tests for validators."""

import pytest

from secrecylab.utils.validators import (
    validate_bits,
    validate_blocklength,
    validate_mu,
    validate_probability,
    validate_wiretap_pair,
)


class TestValidateProbability:
    """Test probability validation."""

    def test_valid(self):
        """Test values strictly inside the unit interval."""
        assert validate_probability(0.05) == (True, None)

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.5, float("nan"), "0.1"])
    def test_invalid_open(self, p):
        """Test rejecting endpoints and non-numbers."""
        ok, error = validate_probability(p)
        assert ok is False
        assert error

    def test_closed_interval(self):
        """Test endpoints are allowed when requested."""
        assert validate_probability(0.0, open_interval=False)[0] is True
        assert validate_probability(1.0, open_interval=False)[0] is True
        assert validate_probability(1.1, open_interval=False)[0] is False


class TestValidateWiretapPair:
    """Test wiretap pair validation."""

    def test_degraded_pair(self):
        """Test a valid pair."""
        assert validate_wiretap_pair(0.05, 0.3) == (True, None)

    def test_equal_channels(self):
        """Test Eve may not be as good as Bob."""
        ok, error = validate_wiretap_pair(0.2, 0.2)
        assert not ok
        assert "noisier" in error

    @pytest.mark.parametrize("p_e", [0.5, 0.6])
    def test_eve_at_or_beyond_half(self, p_e):
        """Test p_e must stay strictly below 1/2."""
        assert validate_wiretap_pair(0.05, p_e)[0] is False

    def test_bad_bob(self):
        """Test the failing field is named."""
        ok, error = validate_wiretap_pair(0.0, 0.3)
        assert not ok
        assert error.startswith("p_b")


class TestValidateBlocklength:
    """Test block length validation."""

    @pytest.mark.parametrize("N", [1, 2, 256, 1024])
    def test_powers_of_two(self, N):
        """Test valid lengths."""
        assert validate_blocklength(N) == (True, None)

    @pytest.mark.parametrize("N", [0, -4, 3, 100, 2.0])
    def test_invalid(self, N):
        """Test invalid lengths."""
        assert validate_blocklength(N)[0] is False


class TestValidateBits:
    """Test bit vector validation."""

    def test_valid(self):
        """Test a plain bit vector."""
        assert validate_bits([0, 1, 1], length=3) == (True, None)

    def test_non_binary(self):
        """Test rejecting values other than 0 and 1."""
        assert validate_bits([0, 2])[0] is False

    def test_wrong_length(self):
        """Test the length check."""
        ok, error = validate_bits([0, 1], length=3)
        assert not ok
        assert "3" in error

    def test_matrix(self):
        """Test rejecting two-dimensional input."""
        assert validate_bits([[0, 1]])[0] is False


class TestValidateMu:
    """Test alphabet budget validation."""

    def test_valid(self):
        """Test even budgets."""
        assert validate_mu(2) == (True, None)
        assert validate_mu(64) == (True, None)

    @pytest.mark.parametrize("mu", [0, 1, 3, -2, 4.0])
    def test_invalid(self, mu):
        """Test odd, small and non-integer budgets."""
        assert validate_mu(mu)[0] is False
