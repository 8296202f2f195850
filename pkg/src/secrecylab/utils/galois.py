"""Polynomial arithmetic over GF(2) on Python integers (bit j = coefficient of x^j)."""

from functools import lru_cache
from typing import Iterable, Tuple


def degree(a: int) -> int:
    """Degree of a, with deg(0) = -1."""
    return a.bit_length() - 1


def clmul(a: int, b: int) -> int:
    """Carry-less product."""
    if a < b:
        a, b = b, a
    result = 0
    while b:
        low = b & -b
        result ^= a << (low.bit_length() - 1)
        b ^= low
    return result


def clsquare(a: int) -> int:
    """Carry-less square: interleave zeros between the bits of a."""
    return int("0".join(bin(a)[2:]), 2)


def poly_divmod(a: int, m: int) -> Tuple[int, int]:
    if m == 0:
        raise ZeroDivisionError("polynomial division by zero")
    dm = m.bit_length()
    q = 0
    while a.bit_length() >= dm:
        shift = a.bit_length() - dm
        q ^= 1 << shift
        a ^= m << shift
    return q, a


def poly_mod(a: int, m: int) -> int:
    dm = m.bit_length()
    while a.bit_length() >= dm:
        a ^= m << (a.bit_length() - dm)
    return a


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def poly_mulmod(a: int, b: int, m: int) -> int:
    return poly_mod(clmul(a, b), m)


def poly_invmod(a: int, m: int) -> int:
    """Inverse of a modulo m by the extended Euclidean algorithm."""
    r0, r1 = m, poly_mod(a, m)
    s0, s1 = 0, 1
    while r1:
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 ^ clmul(q, s1)
    if r0 != 1:
        raise ZeroDivisionError(f"{a:#x} is not invertible modulo {m:#x}")
    return poly_mod(s0, m)


@lru_cache(maxsize=256)
def is_irreducible(f: int) -> bool:
    """Ben-Or test: f has no factor of degree <= deg(f)/2."""
    k = degree(f)
    if k < 1:
        return False
    if k == 1:
        return True
    if not f & 1:
        return False
    h = 2
    for _ in range(k // 2):
        h = poly_mod(clsquare(h), f)
        if poly_gcd(f, h ^ 2) != 1:
            return False
    return True


@lru_cache(maxsize=64)
def find_irreducible(k: int) -> int:
    """Smallest irreducible polynomial of degree k with constant term 1."""
    if k < 1:
        raise ValueError(f"degree must be >= 1, got {k}")
    for candidate in range((1 << k) | 1, 1 << (k + 1), 2):
        if is_irreducible(candidate):
            return candidate
    raise RuntimeError(f"no irreducible polynomial of degree {k}")  # pragma: no cover


def gf2_rank(rows: Iterable[int]) -> int:
    """Rank over GF(2) of a matrix given as integer row masks."""
    pivots = {}
    rank = 0
    for row in rows:
        while row:
            top = row.bit_length() - 1
            if top not in pivots:
                pivots[top] = row
                rank += 1
                break
            row ^= pivots[top]
    return rank


def bits_to_int(bits) -> int:
    value = 0
    for j, bit in enumerate(bits):
        if int(bit):
            value |= 1 << j
    return value


def int_to_bits(value: int, width: int):
    return [(value >> j) & 1 for j in range(width)]
