"""Tests for the successive-cancellation list decoder."""

import numpy as np
import pytest

from secrecylab.exceptions import InvalidChannelError, InvalidCodeError
from secrecylab.models.channel import DiscreteChannel
from secrecylab.models.code import CodeKind, CodeSpec, GeneratorPoly
from secrecylab.services.codes import encode, encode_u
from secrecylab.services.dmc import bsc
from secrecylab.services.scl import SclDecoder, bsc_llrs, channel_llrs, sc_decode, scl_decode


def noisy_frames(spec, p, frames, rng):
    data = rng.integers(0, 2, size=(frames, spec.k), dtype=np.uint8)
    x = encode(spec, data)
    y = x ^ (rng.random(x.shape) < p).astype(np.uint8)
    return data, y


@pytest.fixture
def pac_spec():
    return CodeSpec(
        N=32,
        profile=[7, 11, 13, 14, 15, 19, 21, 22, 23, 25, 26, 27, 28, 29, 30, 31],
        kind=CodeKind.PAC,
        g=GeneratorPoly.from_octal("133"),
    )


class TestChannelLlrs:
    """Test channel LLR computation."""

    def test_bsc_values(self):
        """Test ln(0.95/0.05) for y=0 and its negation for y=1."""
        llr = channel_llrs(np.array([0, 1]), bsc(0.05))
        assert llr[0] == pytest.approx(np.log(19.0), abs=1e-4)
        assert llr[0] == pytest.approx(2.9444, abs=1e-4)
        assert llr[1] == pytest.approx(-llr[0])

    def test_useless_channel(self):
        """Test BSC(1/2) yields zero LLRs."""
        assert channel_llrs(np.array([0, 1, 1]), bsc(0.5)).tolist() == [0.0, 0.0, 0.0]

    def test_fast_path_agrees(self, rng):
        """Test the BSC shortcut."""
        y = rng.integers(0, 2, size=64)
        assert np.allclose(bsc_llrs(y, 0.11), channel_llrs(y, bsc(0.11)))

    def test_invalid_labels(self):
        """Test rejecting labels outside the output alphabet."""
        with pytest.raises(InvalidChannelError):
            channel_llrs(np.array([0, 2]), bsc(0.1))
        with pytest.raises(InvalidChannelError):
            channel_llrs(np.array([-1]), bsc(0.1))

    def test_clipping(self):
        """Test a noiseless output is clipped rather than infinite."""
        erasure = DiscreteChannel(trans=[[0.5, 0.5, 0.0], [0.0, 0.5, 0.5]])
        assert channel_llrs(np.array([0, 1, 2]), erasure).tolist() == [300.0, 0.0, -300.0]


class TestSclDecoder:
    """Test decoding behaviour."""

    def test_all_frozen(self, rng):
        """Test an all-frozen code returns no data and the penalty sum."""
        spec = CodeSpec(N=16)
        y = rng.integers(0, 2, size=16)
        result = SclDecoder(spec, list_size=4, trace=True).decode(y, bsc(0.2))
        assert result.data.size == 0
        assert result.u.tolist() == [0] * 16
        lam = result.llr_trace
        assert result.path_metric == pytest.approx(float(np.sum(np.abs(lam) * (lam < 0))), abs=1e-9)

    @pytest.mark.parametrize("kind", [CodeKind.POLAR, CodeKind.PAC])
    @pytest.mark.parametrize("list_size", [1, 4])
    def test_noiseless_recovery(self, kind, list_size, rng):
        """Test clean codewords decode exactly with zero metric."""
        spec = CodeSpec(N=16, profile=range(8, 16), kind=kind, g=GeneratorPoly.from_octal("15"))
        decoder = SclDecoder(spec, list_size)
        for _ in range(20):
            data = rng.integers(0, 2, size=8, dtype=np.uint8)
            x = encode(spec, data)
            result = decoder.decode_llrs(20.0 * (1.0 - 2.0 * x))
            assert result.data.tolist() == data.tolist()
            assert result.path_metric == pytest.approx(0.0, abs=1e-9)

    def test_noiseless_pac_full_rate(self, rng):
        """Test a PAC code with every index unfrozen."""
        spec = CodeSpec(N=8, profile=range(8), kind=CodeKind.PAC, g=GeneratorPoly(coeffs=(1, 1)))
        u = rng.integers(0, 2, size=8, dtype=np.uint8)
        result = SclDecoder(spec, 4).decode_llrs(20.0 * (1.0 - 2.0 * encode_u(spec, u)))
        assert result.u.tolist() == u.tolist()

    def test_sc_is_list_of_one(self, pac_spec, rng):
        """Test sc_decode matches scl_decode with L=1."""
        W = bsc(0.06)
        _, y = noisy_frames(pac_spec, 0.06, 20, rng)
        for frame in y:
            assert sc_decode(pac_spec, frame, W).tolist() == scl_decode(pac_spec, frame, W, 1).data.tolist()

    def test_pac_with_identity_precoder_is_polar(self, rng):
        """Test kind=pac without a generator decodes exactly like polar."""
        polar = CodeSpec(N=32, profile=range(16, 32))
        pac = CodeSpec(N=32, profile=range(16, 32), kind=CodeKind.PAC)
        W = bsc(0.1)
        _, y = noisy_frames(polar, 0.1, 20, rng)
        for frame in y:
            a = scl_decode(polar, frame, W, 4)
            b = scl_decode(pac, frame, W, 4)
            assert a.u.tolist() == b.u.tolist()
            assert a.path_metric == pytest.approx(b.path_metric)

    @pytest.mark.parametrize("kind", [CodeKind.POLAR, CodeKind.PAC])
    def test_path_metric_law(self, kind, rng):
        """Test each metric increment is zero or the decision LLR magnitude."""
        spec = CodeSpec(N=32, profile=range(12, 32), kind=kind, g=GeneratorPoly.from_octal("133"))
        decoder = SclDecoder(spec, list_size=8, trace=True)
        W = bsc(0.1)
        _, y = noisy_frames(spec, 0.1, 10, rng)
        for frame in y:
            result = decoder.decode(frame, W)
            steps = np.diff(np.concatenate([[0.0], result.metric_trace]))
            magnitude = np.abs(result.llr_trace)
            ok = np.isclose(steps, 0.0, atol=1e-9) | np.isclose(steps, magnitude, atol=1e-9)
            assert ok.all()
            assert result.metric_trace[-1] == pytest.approx(result.path_metric)

    def test_frozen_positions_stay_zero(self, pac_spec, rng):
        """Test decoded u vectors respect the frozen set."""
        _, y = noisy_frames(pac_spec, 0.15, 10, rng)
        decoder = SclDecoder(pac_spec, 8)
        for frame in y:
            u = decoder.decode(frame, bsc(0.15)).u
            assert not u[pac_spec.frozen_mask()].any()

    def test_larger_list_helps(self, rng):
        """Test L=8 makes no more frame errors than SC on a fixed frame set."""
        spec = CodeSpec(N=32, profile=[11, 13, 14, 15, 19, 21, 22, 23, 25, 26, 27, 28, 29, 30, 31])
        W = bsc(0.08)
        data, y = noisy_frames(spec, 0.08, 200, rng)
        errors = {}
        for list_size in (1, 8):
            decoder = SclDecoder(spec, list_size)
            errors[list_size] = sum(
                not np.array_equal(decoder.decode(frame, W).data, d) for frame, d in zip(y, data)
            )
        assert errors[8] <= errors[1]

    def test_wrong_length(self):
        """Test rejecting an LLR vector of the wrong size."""
        with pytest.raises(InvalidCodeError):
            SclDecoder(CodeSpec(N=8, profile=[7])).decode_llrs(np.zeros(4))

    def test_invalid_list_size(self):
        """Test rejecting L < 1."""
        with pytest.raises(InvalidCodeError):
            SclDecoder(CodeSpec(N=8), list_size=0)
