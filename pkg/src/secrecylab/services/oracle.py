"""Exhaustive checks of bit-channel equivalence and symmetry at tiny block lengths."""

import itertools
import logging
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..exceptions import EnumerationBudgetError, InvalidCodeError
from ..models.channel import DiscreteChannel
from ..models.code import CodeKind, CodeSpec, GeneratorPoly
from ..utils import galois
from .codes import generator_matrix, polar_transform, toeplitz_precode
from .dmc import bsc, is_symmetric, mutual_information, symmetry_permutation
from .polarize import channel_minus, exact_capacities

logger = logging.getLogger(__name__)

ENUMERATION_BUDGET = 2 ** 26
DOMAIN_V = "v"
DOMAIN_U = "u"


class ExactBitChannel(BaseModel):
    """Bit channel i with columns ordered (prefix bits, y) prefix-major."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    index: int
    domain: str
    output_count: int
    matrix: np.ndarray

    @property
    def prefixes(self) -> int:
        return self.matrix.shape[1] // self.output_count

    def submatrix(self, prefix: int) -> np.ndarray:
        start = prefix * self.output_count
        return self.matrix[:, start:start + self.output_count]

    def mutual_information(self) -> float:
        return mutual_information(self.matrix)


def product_channel(W: DiscreteChannel, N: int, budget: int = ENUMERATION_BUDGET) -> np.ndarray:
    """P(y | x) for all x in {0,1}^N (x_0 most significant) and y in Y^N (y_0 most significant)."""
    states = (W.inputs ** N) * (W.outputs ** N)
    if states > budget:
        raise EnumerationBudgetError(f"{states} joint states exceed the budget of {budget}")
    table = np.ones((1, 1))
    for _ in range(N):
        table = np.kron(table, W.trans)
    return table


def _all_vectors(N: int) -> np.ndarray:
    """All N-bit vectors, row s holds the bits of s with s_0 most significant."""
    s = np.arange(1 << N)
    return ((s[:, None] >> (N - 1 - np.arange(N))[None, :]) & 1).astype(np.uint8)


def _as_index(bits: np.ndarray) -> np.ndarray:
    N = bits.shape[-1]
    return (bits.astype(np.int64) << (N - 1 - np.arange(N))).sum(axis=-1)


def _input_table(spec: CodeSpec, W: DiscreteChannel, domain: str, budget: int) -> np.ndarray:
    """P(y | s) where s is the v vector (polar) or the u vector (PAC precoder applied first)."""
    if domain not in (DOMAIN_U, DOMAIN_V):
        raise InvalidCodeError(f"domain must be 'u' or 'v', got {domain!r}")
    Wn = product_channel(W, spec.N, budget)
    s = _all_vectors(spec.N)
    v = toeplitz_precode(s, spec.g) if domain == DOMAIN_U else s
    return Wn[_as_index(polar_transform(v))]


def exact_bit_channel(spec: CodeSpec, W: DiscreteChannel, i: int, domain: str = DOMAIN_V,
                      budget: int = ENUMERATION_BUDGET) -> ExactBitChannel:
    """W_i(y, s_0..s_{i-1} | s_i) = 2^-(N-1) sum over the suffix of P(y | s)."""
    N = spec.N
    if not 0 <= i < N:
        raise InvalidCodeError(f"index must lie in 0..{N - 1}, got {i}")
    table = _input_table(spec, W, domain, budget)
    return _bit_channel_from_table(table, N, W.outputs ** N, i, domain)


def _bit_channel_from_table(table: np.ndarray, N: int, outputs: int, i: int, domain: str) -> ExactBitChannel:
    shaped = table.reshape(1 << i, 2, 1 << (N - i - 1), outputs)
    marginal = shaped.sum(axis=2) / float(1 << (N - 1))
    matrix = marginal.transpose(1, 0, 2).reshape(2, (1 << i) * outputs)
    return ExactBitChannel(index=i, domain=domain, output_count=outputs, matrix=matrix)


def exact_bit_channels(spec: CodeSpec, W: DiscreteChannel, domain: str = DOMAIN_V,
                       budget: int = ENUMERATION_BUDGET) -> List[ExactBitChannel]:
    table = _input_table(spec, W, domain, budget)
    outputs = W.outputs ** spec.N
    return [_bit_channel_from_table(table, spec.N, outputs, i, domain) for i in range(spec.N)]


def exact_mutual_informations(spec: CodeSpec, W: DiscreteChannel, domain: str = DOMAIN_V,
                              budget: int = ENUMERATION_BUDGET) -> np.ndarray:
    return np.array([ch.mutual_information() for ch in exact_bit_channels(spec, W, domain, budget)])


def _canonical_columns(matrix: np.ndarray) -> np.ndarray:
    rounded = np.round(matrix, 10)
    order = np.lexsort(rounded[::-1])
    return rounded[:, order]


def equivalent_by_column_permutation(Pa: ExactBitChannel, Pb: ExactBitChannel, tol: float = 1e-10) -> bool:
    """True iff both matrices hold the same multiset of columns."""
    if Pa.matrix.shape != Pb.matrix.shape:
        return False
    return bool(np.allclose(_canonical_columns(Pa.matrix), _canonical_columns(Pb.matrix), rtol=0.0, atol=tol))


def check_submatrix_symmetry(P: ExactBitChannel, tol: float = 1e-9) -> bool:
    """Every per-prefix submatrix admits an involution pi with A(0, y) = A(1, pi(y))."""
    for prefix in range(P.prefixes):
        sub = P.submatrix(prefix)
        if symmetry_permutation(sub[0], sub[1], tol) is None:
            return False
    return True


class MiChainReport(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    total_u: float
    total_v: float
    total_x: float
    per_index_u: List[float]
    per_index_v: List[float]
    max_abs_error: float

    def passed(self, tol: float = 1e-10) -> bool:
        return self.max_abs_error <= tol


def mi_chain_check(spec: CodeSpec, W: DiscreteChannel, budget: int = ENUMERATION_BUDGET) -> MiChainReport:
    """Compare I(U;Y), I(V;Y), I(X;Y) and the per-index chain terms."""
    Wn = product_channel(W, spec.N, budget)
    table_u = _input_table(spec, W, DOMAIN_U, budget)
    table_v = _input_table(spec, W, DOMAIN_V, budget)
    total_x = mutual_information(Wn)
    total_u = mutual_information(table_u)
    total_v = mutual_information(table_v)
    outputs = W.outputs ** spec.N
    per_u = [_bit_channel_from_table(table_u, spec.N, outputs, i, DOMAIN_U).mutual_information()
             for i in range(spec.N)]
    per_v = [_bit_channel_from_table(table_v, spec.N, outputs, i, DOMAIN_V).mutual_information()
             for i in range(spec.N)]
    errors = [abs(total_u - total_x), abs(total_v - total_x), abs(sum(per_u) - total_u)]
    errors += [abs(a - b) for a, b in zip(per_u, per_v)]
    return MiChainReport(
        total_u=total_u,
        total_v=total_v,
        total_x=total_x,
        per_index_u=per_u,
        per_index_v=per_v,
        max_abs_error=max(errors),
    )


def _row_masks(matrix: np.ndarray) -> List[int]:
    matrix = np.asarray(matrix, dtype=np.uint8)
    return [int("".join(str(int(b)) for b in row), 2) if row.size else 0 for row in matrix]


def coset_superchannel(G: np.ndarray, Gp: np.ndarray, W: DiscreteChannel,
                       budget: int = ENUMERATION_BUDGET) -> DiscreteChannel:
    """W*(y | m) = 2^-(n-k) sum_r W^n(y | m Gp + r G), messages indexed m_0 most significant."""
    Gp = np.atleast_2d(np.asarray(Gp, dtype=np.uint8))
    n = Gp.shape[1]
    G = np.asarray(G, dtype=np.uint8).reshape(-1, n)
    stacked = np.concatenate([G, Gp])
    if galois.gf2_rank(_row_masks(stacked)) != stacked.shape[0]:
        raise InvalidCodeError("stacked generator [G; Gp] is rank deficient over GF(2)")
    Wn = product_channel(W, n, budget)
    k, rand = Gp.shape[0], G.shape[0]
    messages = _all_vectors(k) if k else np.zeros((1, 0), dtype=np.uint8)
    randoms = _all_vectors(rand) if rand else np.zeros((1, 0), dtype=np.uint8)
    base = (messages.astype(np.int64) @ Gp.astype(np.int64)) % 2
    offsets = (randoms.astype(np.int64) @ G.astype(np.int64)) % 2
    rows = np.zeros((messages.shape[0], Wn.shape[1]))
    for shift in offsets:
        rows += Wn[_as_index((base + shift) % 2)]
    rows /= offsets.shape[0]
    if rows.shape[0] == 1:
        rows = np.vstack([rows, rows])
    return DiscreteChannel(trans=rows)


def _coordinate_permutation(pi: np.ndarray, flips: np.ndarray, outputs: int) -> np.ndarray:
    """Permutation of Y^n applying pi on the coordinates where flips is 1."""
    n = flips.size
    labels = np.array(list(itertools.product(range(outputs), repeat=n)), dtype=np.int64)
    mapped = np.where(flips[None, :] == 1, pi[labels], labels)
    weights = outputs ** (n - 1 - np.arange(n))
    return (mapped * weights).sum(axis=1)


def check_superchannel_symmetry(Wstar: DiscreteChannel, Gp: Optional[np.ndarray] = None,
                                base: Optional[DiscreteChannel] = None, tol: float = 1e-10) -> bool:
    """Rows are permutations of each other; with Gp and base, the coordinate-wise permutation
    built from the base channel's symmetry maps row m onto row m + e_j for every message basis vector."""
    rows = np.sort(Wstar.trans, axis=1)
    if not np.allclose(rows, rows[0][None, :], rtol=0.0, atol=tol):
        return False
    if Gp is None or base is None:
        return True
    pi = is_symmetric(base)
    if pi is None:
        return False
    Gp = np.atleast_2d(np.asarray(Gp, dtype=np.uint8))
    k = Gp.shape[0]
    if Wstar.inputs != 1 << k and not (k == 0 and Wstar.inputs == 2):
        return False
    for j in range(k):
        perm = _coordinate_permutation(pi, Gp[j], base.outputs)
        flip = 1 << (k - 1 - j)
        for m in range(1 << k):
            if not np.allclose(Wstar.trans[m ^ flip][perm], Wstar.trans[m], rtol=0.0, atol=tol):
                return False
    return True


def uniform_prior_is_optimal(Wstar: DiscreteChannel, trials: int = 200,
                             rng: Optional[np.random.Generator] = None, tol: float = 1e-12) -> bool:
    """Uniform messages leak at least as much as any sampled non-uniform prior."""
    rng = rng if rng is not None else np.random.default_rng(0)
    uniform = mutual_information(Wstar.trans)
    for _ in range(trials):
        prior = rng.dirichlet(np.ones(Wstar.inputs))
        if mutual_information(Wstar.trans, prior) > uniform + tol:
            return False
    return True


class LeakageCheck(BaseModel):
    exact: float
    bound: float

    def holds(self, tol: float = 1e-12) -> bool:
        return self.exact <= self.bound + tol


def leakage_consistency(N: int, A: Sequence[int], R: Sequence[int], W: DiscreteChannel,
                        budget: int = ENUMERATION_BUDGET) -> LeakageCheck:
    """Exact I(M;Z) of a polar coset code against the sum of exact bit-channel capacities outside R."""
    rows = generator_matrix(N)
    A = sorted(A)
    R = sorted(R)
    G = rows[R] if R else np.zeros((0, N))
    Gp = rows[A] if A else np.zeros((0, N))
    Wstar = coset_superchannel(G, Gp, W, budget)
    exact = mutual_information(Wstar.trans) if A else 0.0
    capacities = exact_capacities(W, N.bit_length() - 1)
    outside = np.ones(N, dtype=bool)
    outside[R] = False
    return LeakageCheck(exact=exact, bound=float(capacities[outside].sum()))


class VerificationRecord(BaseModel):
    check: str
    instance: Dict[str, Any] = Field(default_factory=dict)
    passed: bool
    max_abs_error: Optional[float] = None


GENERATORS = {"1+D": (1, 1), "1+D+D^2": (1, 1, 1), "1+D^2+D^3": (1, 0, 1, 1)}


def run_verification_suite(full: bool = False, seed: int = 0,
                           budget: int = ENUMERATION_BUDGET) -> List[VerificationRecord]:
    """Run the exhaustive checks; the quick variant stops at N=4.

    Every enumeration is capped at budget joint states.
    """
    records: List[VerificationRecord] = []
    lengths = (2, 4, 8) if full else (2, 4)
    crossovers = (0.11, 0.2, 0.3)
    rng = np.random.default_rng(seed)

    for p in crossovers:
        W = bsc(p)
        minus = mutual_information(channel_minus(W).trans)
        exact = exact_bit_channel(CodeSpec(N=2), W, 0, budget=budget).mutual_information()
        records.append(VerificationRecord(
            check="bit_channel_vs_synthesis", instance={"N": 2, "p": p, "i": 0},
            passed=abs(minus - exact) <= 1e-12, max_abs_error=abs(minus - exact)))
        for N in lengths:
            synthesized = exact_capacities(W, N.bit_length() - 1)
            enumerated = exact_mutual_informations(CodeSpec(N=N), W, budget=budget)
            err = float(np.max(np.abs(synthesized - enumerated)))
            records.append(VerificationRecord(
                check="exact_capacities", instance={"N": N, "p": p},
                passed=err <= 1e-10, max_abs_error=err))

            polar = exact_bit_channels(CodeSpec(N=N), W, DOMAIN_V, budget)
            records.append(VerificationRecord(
                check="submatrix_symmetry", instance={"N": N, "p": p},
                passed=all(check_submatrix_symmetry(ch) for ch in polar)))
            for name, coeffs in GENERATORS.items():
                if len(coeffs) - 1 >= N:
                    continue
                spec = CodeSpec(N=N, kind=CodeKind.PAC, g=GeneratorPoly(coeffs=coeffs))
                pac = exact_bit_channels(spec, W, DOMAIN_U, budget)
                equivalent = all(equivalent_by_column_permutation(a, b) for a, b in zip(polar, pac))
                report = mi_chain_check(spec, W, budget)
                records.append(VerificationRecord(
                    check="column_permutation_equivalence", instance={"N": N, "p": p, "g": name},
                    passed=equivalent))
                records.append(VerificationRecord(
                    check="mi_chain", instance={"N": N, "p": p, "g": name},
                    passed=report.passed(), max_abs_error=report.max_abs_error))

    toy_codes = [
        ("repetition_n2", np.array([[1, 1]]), np.array([[1, 0]]), 0.3),
        ("trivial_n2", np.zeros((0, 2)), np.eye(2, dtype=np.uint8), 0.2),
        ("polar_n4", generator_matrix(4)[[0, 1]], generator_matrix(4)[[3]], 0.25),
    ]
    for name, G, Gp, p in toy_codes:
        W = bsc(p)
        Wstar = coset_superchannel(G, Gp, W, budget)
        records.append(VerificationRecord(
            check="superchannel_symmetry", instance={"code": name, "p": p},
            passed=check_superchannel_symmetry(Wstar, Gp, W)))
        records.append(VerificationRecord(
            check="uniform_prior_optimal", instance={"code": name, "p": p},
            passed=uniform_prior_is_optimal(Wstar, 200, rng)))

    N = 8 if full else 4
    W = bsc(0.25)
    for trial in range(10):
        labels = rng.permutation(N)
        k = int(rng.integers(1, N // 2 + 1))
        r = int(rng.integers(0, N - k + 1))
        check = leakage_consistency(N, labels[:k].tolist(), labels[k:k + r].tolist(), W, budget)
        records.append(VerificationRecord(
            check="leakage_consistency", instance={"N": N, "trial": trial},
            passed=check.holds(), max_abs_error=max(check.exact - check.bound, 0.0)))

    failed = [r for r in records if not r.passed]
    logger.info("verification: %d checks, %d failed", len(records), len(failed))
    return records
