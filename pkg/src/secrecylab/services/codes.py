"""Polar transform, PAC convolutional precoder and block encoders."""

from typing import Optional

import numpy as np

from ..exceptions import InvalidCodeError
from ..models.bounds import BitChannelBounds
from ..models.code import CodeSpec, GeneratorPoly
from ..utils.validators import validate_blocklength


def bit_reversal_permutation(n: int) -> np.ndarray:
    """perm[j] = j with its n-bit binary expansion reversed."""
    idx = np.arange(1 << n)
    rev = np.zeros_like(idx)
    for bit in range(n):
        rev |= ((idx >> bit) & 1) << (n - 1 - bit)
    return rev


def polar_transform(v: np.ndarray) -> np.ndarray:
    """x = v B_N F^{(x)n} over GF(2), F = [[1, 0], [1, 1]]; acts on the last axis."""
    x = np.array(v, dtype=np.uint8) & 1
    N = x.shape[-1]
    ok, error = validate_blocklength(N)
    if not ok:
        raise InvalidCodeError(error)
    lead = x.shape[:-1]
    h = 1
    while h < N:
        blocks = x.reshape(lead + (N // (2 * h), 2, h))
        blocks[..., 0, :] ^= blocks[..., 1, :]
        h *= 2
    return x[..., bit_reversal_permutation(N.bit_length() - 1)]


def toeplitz_precode(u: np.ndarray, g: Optional[GeneratorPoly]) -> np.ndarray:
    """v_i = sum_j g_j u_{i-j} (mod 2); g=None is the identity."""
    u = np.array(u, dtype=np.uint8) & 1
    if g is None:
        return u
    v = u.copy()
    N = u.shape[-1]
    for j, coeff in enumerate(g.coeffs[1:], start=1):
        if coeff and j < N:
            v[..., j:] ^= u[..., :-j]
    return v


def conv_invert(v: np.ndarray, g: Optional[GeneratorPoly]) -> np.ndarray:
    """Unique u with toeplitz_precode(u, g) = v: u_i = v_i + g_1 u_{i-1} + ... + g_m u_{i-m}."""
    v = np.array(v, dtype=np.uint8) & 1
    if g is None:
        return v
    u = v.copy()
    taps = [j for j, coeff in enumerate(g.coeffs[1:], start=1) if coeff]
    for i in range(u.shape[-1]):
        for j in taps:
            if j <= i:
                u[..., i] ^= u[..., i - j]
    return u


def embed(spec: CodeSpec, data: np.ndarray) -> np.ndarray:
    """Place data bits at the profile positions of an all-zero u vector."""
    data = np.asarray(data, dtype=np.uint8)
    if data.shape[-1] != spec.k:
        raise InvalidCodeError(f"expected {spec.k} data bits, got {data.shape[-1]}")
    u = np.zeros(data.shape[:-1] + (spec.N,), dtype=np.uint8)
    u[..., list(spec.profile)] = data
    return u


def encode_u(spec: CodeSpec, u: np.ndarray) -> np.ndarray:
    """Codeword for a full u vector: precode (PAC) then polar transform."""
    u = np.asarray(u, dtype=np.uint8)
    if u.shape[-1] != spec.N:
        raise InvalidCodeError(f"expected {spec.N} input bits, got {u.shape[-1]}")
    return polar_transform(toeplitz_precode(u, spec.precoder))


def encode(spec: CodeSpec, data: np.ndarray) -> np.ndarray:
    return encode_u(spec, embed(spec, data))


def invert_encode(spec: CodeSpec, codeword: np.ndarray) -> np.ndarray:
    """Recover data bits from an error-free codeword."""
    v = polar_transform(codeword)
    u = conv_invert(v, spec.precoder)
    return u[..., list(spec.profile)]


def generator_matrix(N: int) -> np.ndarray:
    """G_N as an N x N bit matrix; row i is the codeword of the i-th unit vector."""
    return polar_transform(np.eye(N, dtype=np.uint8))


def reliability_profile(bounds: BitChannelBounds, k: int) -> tuple:
    """The k indices with the highest capacity_lb, ties to the lower index."""
    if not 0 <= k <= bounds.N:
        raise InvalidCodeError(f"k must lie in 0..{bounds.N}, got {k}")
    idx = np.arange(bounds.N)
    order = np.lexsort((idx, -bounds.capacity_lb))
    return tuple(sorted(order[:k].tolist()))
