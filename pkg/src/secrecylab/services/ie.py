"""Invertible-extractor secrecy coding over GF(2^k)."""

import logging
import math
from typing import Callable, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel

from ..exceptions import DecodingFailure, FieldError, InvalidCodeError, SecrecyLabError
from ..models.code import CodeSpec
from ..models.field import FieldElement, IeParams
from ..utils import galois
from .codes import encode
from .dmc import binary_entropy

logger = logging.getLogger(__name__)

BlockEncoder = Callable[[np.ndarray], np.ndarray]
BlockDecoder = Callable[[np.ndarray], np.ndarray]


def gf_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    if a.modulus != b.modulus:
        raise FieldError(f"operands live in different fields ({a.modulus:#x} vs {b.modulus:#x})")
    return FieldElement(value=galois.poly_mulmod(a.value, b.value, a.modulus), modulus=a.modulus)


def gf_inv(a: FieldElement) -> FieldElement:
    if a.is_zero():
        raise FieldError("zero has no multiplicative inverse")
    return FieldElement(value=galois.poly_invmod(a.value, a.modulus), modulus=a.modulus)


def find_irreducible(k: int) -> int:
    """Smallest irreducible degree-k modulus with constant term 1."""
    return galois.find_irreducible(k)


def draw_seed(modulus: int, rng: np.random.Generator) -> FieldElement:
    """Uniform nonzero field element."""
    k = modulus.bit_length() - 1
    while True:
        value = galois.bits_to_int(rng.integers(0, 2, size=k))
        if value:
            return FieldElement(value=value, modulus=modulus)


def message_dimension(N: int, p_b: float, nu: float) -> int:
    """k = round((1 - h2(p_b) - nu) N)."""
    return int(round((1.0 - binary_entropy(p_b) - nu) * N))


def make_params(N: int, p_b: float, nu: float, b: int, t: int = 1,
                seed_element: Optional[FieldElement] = None) -> IeParams:
    k = message_dimension(N, p_b, nu)
    if k <= 0:
        raise SecrecyLabError(f"no positive dimension at N={N}, p_b={p_b}, nu={nu}")
    return IeParams(N=N, k=k, b=b, t=t, nu=nu, modulus=find_irreducible(k), seed_element=seed_element)


def _block_encoder(code: Union[CodeSpec, BlockEncoder], k: int) -> BlockEncoder:
    if isinstance(code, CodeSpec):
        if code.k != k:
            raise InvalidCodeError(f"block code carries {code.k} bits, extractor needs {k}")
        return lambda bits: encode(code, bits)
    return code


def ie_encode(
    params: IeParams,
    msg: Sequence[int],
    code: Union[CodeSpec, BlockEncoder],
    rng: np.random.Generator,
) -> np.ndarray:
    """C(A) followed by C(A * (M[i] | R[i])) for i = 1..t; shape (t + 1, N)."""
    msg = np.asarray(msg, dtype=np.uint8)
    if msg.shape != (params.message_bits,):
        raise InvalidCodeError(f"expected {params.message_bits} message bits, got {msg.shape}")
    seed = params.seed_element
    if seed is None or seed.is_zero():
        raise FieldError("extractor seed must be a nonzero field element")
    encoder = _block_encoder(code, params.k)
    blocks = [encoder(np.array(seed.bits(), dtype=np.uint8))]
    for chunk in msg.reshape(params.t, params.b):
        padding = rng.integers(0, 2, size=params.k - params.b, dtype=np.uint8)
        word = FieldElement.from_bits(np.concatenate([chunk, padding]), params.modulus)
        blocks.append(encoder(np.array(gf_mul(seed, word).bits(), dtype=np.uint8)))
    return np.stack(blocks)


def ie_decode(params: IeParams, received: np.ndarray, decoder: BlockDecoder) -> np.ndarray:
    """Decode the seed block, then undo the field multiply on every payload block."""
    received = np.asarray(received)
    if received.shape[0] != params.t + 1:
        raise InvalidCodeError(f"expected {params.t + 1} blocks, got {received.shape[0]}")
    seed = FieldElement.from_bits(decoder(received[0]), params.modulus)
    if seed.is_zero():
        raise DecodingFailure("seed block decoded to the zero element")
    inverse = gf_inv(seed)
    pieces = []
    for block in received[1:]:
        word = gf_mul(inverse, FieldElement.from_bits(decoder(block), params.modulus))
        pieces.append(np.array(word.bits()[: params.b], dtype=np.uint8))
    return np.concatenate(pieces)


def ie_semantic_bound(N: int) -> float:
    """delta <= 6 * 2^(-sqrt(N))."""
    if N < 1:
        raise SecrecyLabError(f"N must be >= 1, got {N}")
    return 6.0 * 2.0 ** (-math.sqrt(N))


def ie_secrecy_bits(N: int) -> float:
    """-log2 of ie_semantic_bound(N)."""
    return math.sqrt(N) - math.log2(6.0)


def ie_mi_bound(delta: float, N: int) -> float:
    """I(M;Z) <= 2 delta (N + log2(1/delta)) bits."""
    if not 0.0 < delta <= 1.0:
        raise SecrecyLabError(f"delta must lie in (0, 1], got {delta}")
    return 2.0 * delta * (N + math.log2(1.0 / delta))


def ie_block_fer_bound(block_fer: float, t: int) -> float:
    """Frame error rate of t + 1 independently decoded blocks."""
    return 1.0 - (1.0 - block_fer) ** (t + 1)


class IeFeasibility(BaseModel):
    N: int
    p_b: float
    nu: float
    k: int
    b: Optional[int] = None
    feasible: bool
    reason: Optional[str] = None


def check_ie_feasibility(N: int, p_b: float, nu: float, b_over_N: Optional[float] = None) -> IeFeasibility:
    """Report whether the extractor admits a positive dimension and secret length."""
    k = message_dimension(N, p_b, nu)
    b = None if b_over_N is None else int(round(b_over_N * N))
    reason = None
    if k <= 0:
        reason = f"k={k}: the code rate budget leaves no room at nu={nu}"
    elif b is not None and not 0 < b <= k:
        reason = f"b={b} must lie in 1..{k}"
    return IeFeasibility(N=N, p_b=p_b, nu=nu, k=k, b=b, feasible=reason is None, reason=reason)
