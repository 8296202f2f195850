"""Wiretap coset design and its secrecy report."""

from typing import Any, ClassVar, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from .bounds import BitChannelBounds
from .code import CodeKind, CodeSpec, GeneratorPoly


class SecrecyDesign(BaseModel):
    """Partition of the index set into information A, random R and frozen B."""

    model_config = ConfigDict(frozen=True)

    N: int
    A: Tuple[int, ...]
    R: Tuple[int, ...]
    B: Tuple[int, ...]
    kind: CodeKind = CodeKind.POLAR
    g: Optional[GeneratorPoly] = None
    eve_bounds: Optional[BitChannelBounds] = None
    bob_bounds: Optional[BitChannelBounds] = None

    @field_validator("A", "R", "B", mode="before")
    @classmethod
    def _sorted(cls, v: Any) -> Tuple[int, ...]:
        return tuple(sorted(int(i) for i in v))

    @model_validator(mode="after")
    def _check_partition(self) -> "SecrecyDesign":
        union = list(self.A) + list(self.R) + list(self.B)
        if sorted(union) != list(range(self.N)):
            raise ValueError("A, R and B must partition 0..N-1")
        for bounds in (self.eve_bounds, self.bob_bounds):
            if bounds is not None and bounds.N != self.N:
                raise ValueError(f"bounds at N={bounds.N} do not match design N={self.N}")
        return self

    @property
    def k(self) -> int:
        return len(self.A)

    @property
    def r(self) -> int:
        return len(self.R)

    @property
    def unfrozen(self) -> Tuple[int, ...]:
        return tuple(sorted(self.A + self.R))

    def code_spec(self) -> CodeSpec:
        """Code over A and R together, as seen by Bob's decoder."""
        return CodeSpec(N=self.N, profile=self.unfrozen, kind=self.kind, g=self.g)

    def to_json_dict(self) -> Dict[str, Any]:
        return {
            "N": self.N,
            "A": list(self.A),
            "R": list(self.R),
            "B": list(self.B),
            "kind": self.kind.value,
            "g": list(self.g.coeffs) if self.g is not None else [],
        }

    @classmethod
    def from_json_dict(cls, data: Dict[str, Any], **bounds) -> "SecrecyDesign":
        g = data.get("g") or None
        return cls(
            N=data["N"],
            A=data["A"],
            R=data["R"],
            B=data["B"],
            kind=CodeKind(data.get("kind", "polar")),
            g=GeneratorPoly(coeffs=tuple(g)) if g else None,
            **bounds,
        )


class SecrecyReport(BaseModel):
    N: int
    pe: float
    k: int
    leakage_ub: float
    secrecy_capacity: float
    rate: float
    effective_rate: float
    delta_raw: float
    delta_rounded: int

    CSV_COLUMNS: ClassVar[List[str]] = ["pe", "k", "I_bar", "C_s", "R_s", "R_eff", "delta_raw", "delta_rounded"]

    def csv_row(self) -> List[Any]:
        return [
            self.pe,
            self.k,
            self.leakage_ub,
            self.secrecy_capacity,
            self.rate,
            self.effective_rate,
            self.delta_raw,
            self.delta_rounded,
        ]
