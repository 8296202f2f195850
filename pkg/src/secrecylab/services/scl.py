"""LLR-domain successive-cancellation list decoding for polar and PAC codes.

Paths branch on u_i. For PAC codes every path carries its own convolution
register and the decision LLR refers to v_i = u_i + c_i, where c_i is the
register contribution of earlier u bits. The path metric grows by |lambda|
whenever v_i disagrees with the hard decision h(lambda).
"""

import logging
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from ..exceptions import InvalidChannelError, InvalidCodeError
from ..models.channel import DiscreteChannel
from ..models.code import CodeSpec
from .codes import bit_reversal_permutation

logger = logging.getLogger(__name__)

LLR_CLIP = 300.0


def channel_llrs(y: np.ndarray, W: DiscreteChannel) -> np.ndarray:
    """ln(W(y|0) / W(y|1)) per received symbol, clipped to +-300."""
    y = np.asarray(y)
    if y.size and (y.min() < 0 or y.max() >= W.outputs or not np.issubdtype(y.dtype, np.integer)):
        raise InvalidChannelError(f"received labels must be integers in 0..{W.outputs - 1}")
    with np.errstate(divide="ignore", invalid="ignore"):
        table = np.log(W.trans[0]) - np.log(W.trans[1])
    table = np.nan_to_num(table, nan=0.0, posinf=LLR_CLIP, neginf=-LLR_CLIP)
    return np.clip(table, -LLR_CLIP, LLR_CLIP)[y]


def bsc_llrs(y: np.ndarray, p: float) -> np.ndarray:
    """Fast path of channel_llrs for BSC(p)."""
    magnitude = min(np.log((1.0 - p) / p), LLR_CLIP)
    return magnitude * (1.0 - 2.0 * np.asarray(y, dtype=float))


def _f(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """2 atanh(tanh(a/2) tanh(b/2)) in a log-domain form."""
    return np.clip(np.logaddexp(0.0, a + b) - np.logaddexp(a, b), -LLR_CLIP, LLR_CLIP)


def _g(a: np.ndarray, b: np.ndarray, bits: np.ndarray) -> np.ndarray:
    return np.clip(b + (1.0 - 2.0 * bits) * a, -LLR_CLIP, LLR_CLIP)


class DecodeResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    data: np.ndarray
    u: np.ndarray
    path_metric: float
    metric_trace: Optional[np.ndarray] = None
    llr_trace: Optional[np.ndarray] = None


class DecoderState:
    """Per-path workspace: staged LLRs, partial sums, decisions and metrics."""

    def __init__(self, N: int, memory: int, channel_llr: np.ndarray, trace: bool = False):
        self.n = N.bit_length() - 1
        self.N = N
        self.llr: List[np.ndarray] = [channel_llr[None, :]] + [
            np.zeros((1, N >> d)) for d in range(1, self.n + 1)
        ]
        self.partial: List[np.ndarray] = [np.zeros((1, N >> (d + 1)), dtype=np.uint8) for d in range(self.n)]
        self.u = np.zeros((1, N), dtype=np.uint8)
        self.register = np.zeros((1, memory), dtype=np.uint8)
        self.pm = np.zeros(1)
        self.trace = trace
        self.metric_trace = np.zeros((1, N)) if trace else None
        self.llr_trace = np.zeros((1, N)) if trace else None

    @property
    def active(self) -> int:
        return self.pm.shape[0]

    def select(self, parents: np.ndarray) -> None:
        """Keep the paths listed in parents, duplicating where needed."""
        self.llr = [arr[parents] for arr in self.llr]
        self.partial = [arr[parents] for arr in self.partial]
        self.u = self.u[parents]
        self.register = self.register[parents]
        self.pm = self.pm[parents]
        if self.trace:
            self.metric_trace = self.metric_trace[parents]
            self.llr_trace = self.llr_trace[parents]


class SclDecoder:
    """Reusable SCL decoder for one code."""

    def __init__(self, spec: CodeSpec, list_size: int = 16, trace: bool = False):
        if list_size < 1:
            raise InvalidCodeError(f"list size must be >= 1, got {list_size}")
        self.spec = spec
        self.list_size = list_size
        self.trace = trace
        self.n = spec.n
        self.frozen = spec.frozen_mask()
        g = spec.precoder
        self.taps = g.taps if g is not None else np.zeros(0, dtype=np.uint8)
        self._bitrev = bit_reversal_permutation(self.n)

    def _descend(self, state: DecoderState, i: int) -> None:
        n = self.n
        if i == 0:
            start = 0
        else:
            trailing = 0
            prev = i - 1
            while prev & 1:
                trailing += 1
                prev >>= 1
            start = n - 1 - trailing
            parent = state.llr[start]
            half = parent.shape[1] // 2
            state.llr[start + 1] = _g(parent[:, :half], parent[:, half:], state.partial[start])
            start += 1
        for d in range(start, n):
            parent = state.llr[d]
            half = parent.shape[1] // 2
            state.llr[d + 1] = _f(parent[:, :half], parent[:, half:])

    def _ascend(self, state: DecoderState, i: int, v: np.ndarray) -> None:
        code = v[:, None].astype(np.uint8)
        for d in range(self.n, 0, -1):
            if ((i >> (self.n - d)) & 1) == 0:
                state.partial[d - 1] = code
                return
            code = np.concatenate([state.partial[d - 1] ^ code, code], axis=1)

    def _conv_bits(self, state: DecoderState) -> np.ndarray:
        if self.taps.size == 0:
            return np.zeros(state.active, dtype=np.uint8)
        return (state.register.astype(np.int64) @ self.taps.astype(np.int64) % 2).astype(np.uint8)

    def _push_register(self, state: DecoderState, ubits: np.ndarray) -> None:
        if self.taps.size:
            state.register = np.concatenate([ubits[:, None], state.register[:, :-1]], axis=1)

    def decode_llrs(self, channel_llr: np.ndarray) -> DecodeResult:
        """Decode from channel LLRs given in codeword order."""
        N = self.spec.N
        channel_llr = np.asarray(channel_llr, dtype=float)
        if channel_llr.shape != (N,):
            raise InvalidCodeError(f"expected {N} channel LLRs, got shape {channel_llr.shape}")
        state = DecoderState(N, self.taps.size, channel_llr[self._bitrev], self.trace)
        L = self.list_size

        for i in range(N):
            self._descend(state, i)
            lam = state.llr[self.n][:, 0]
            hard = (lam < 0).astype(np.uint8)
            penalty = np.abs(lam)
            conv = self._conv_bits(state)

            if self.frozen[i]:
                ubits = np.zeros(state.active, dtype=np.uint8)
                vbits = conv
                state.pm = state.pm + penalty * (vbits != hard)
            else:
                count = state.active
                cand_pm = np.stack([
                    state.pm + penalty * (conv != hard),
                    state.pm + penalty * ((conv ^ 1) != hard),
                ], axis=1).ravel()
                cand_u = np.tile(np.array([0, 1], dtype=np.uint8), count)
                cand_parent = np.repeat(np.arange(count), 2)
                if 2 * count > L:
                    ranked = np.lexsort((cand_parent, cand_u, cand_pm))[:L]
                    chosen = np.sort(ranked)
                else:
                    chosen = np.arange(2 * count)
                state.select(cand_parent[chosen])
                state.pm = cand_pm[chosen]
                ubits = cand_u[chosen]
                vbits = ubits ^ self._conv_bits(state)
                lam = state.llr[self.n][:, 0]

            state.u[:, i] = ubits
            if state.trace:
                state.metric_trace[:, i] = state.pm
                state.llr_trace[:, i] = lam
            self._push_register(state, ubits)
            self._ascend(state, i, vbits)

        best = int(np.argmin(state.pm))
        u_hat = state.u[best].copy()
        return DecodeResult(
            data=u_hat[list(self.spec.profile)],
            u=u_hat,
            path_metric=float(state.pm[best]),
            metric_trace=state.metric_trace[best].copy() if state.trace else None,
            llr_trace=state.llr_trace[best].copy() if state.trace else None,
        )

    def decode(self, y: np.ndarray, W: DiscreteChannel) -> DecodeResult:
        return self.decode_llrs(channel_llrs(y, W))


def scl_decode(spec: CodeSpec, y: np.ndarray, W: DiscreteChannel, list_size: int = 16,
               trace: bool = False) -> DecodeResult:
    return SclDecoder(spec, list_size, trace).decode(y, W)


def sc_decode(spec: CodeSpec, y: np.ndarray, W: DiscreteChannel) -> np.ndarray:
    """Successive cancellation: the list decoder with L = 1."""
    return scl_decode(spec, y, W, list_size=1).data
