"""GF(2^k) elements and invertible-extractor parameters."""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, field_validator, model_validator


class FieldElement(BaseModel):
    """Element of GF(2^k); bit j of value is the coefficient of x^j."""

    model_config = ConfigDict(frozen=True)

    value: int
    modulus: int

    @model_validator(mode="after")
    def _reduced(self) -> "FieldElement":
        if self.modulus < 3 or not self.modulus & 1:
            raise ValueError(f"modulus {self.modulus:#x} must have degree >= 1 and constant term 1")
        if self.value < 0 or self.value.bit_length() >= self.modulus.bit_length():
            raise ValueError(f"value {self.value:#x} is not reduced modulo {self.modulus:#x}")
        return self

    @property
    def k(self) -> int:
        return self.modulus.bit_length() - 1

    def is_zero(self) -> bool:
        return self.value == 0

    def bits(self) -> List[int]:
        """Coefficients x^0..x^{k-1}."""
        return [(self.value >> j) & 1 for j in range(self.k)]

    @classmethod
    def from_bits(cls, bits, modulus: int) -> "FieldElement":
        value = 0
        for j, bit in enumerate(bits):
            if int(bit):
                value |= 1 << j
        return cls(value=value, modulus=modulus)


class IeParams(BaseModel):
    N: int
    k: int
    b: int
    t: int = 1
    nu: float = 0.1
    modulus: int
    seed_element: Optional[FieldElement] = None

    @field_validator("t")
    @classmethod
    def _blocks(cls, v: int) -> int:
        if v < 1:
            raise ValueError("t must be >= 1")
        return v

    @model_validator(mode="after")
    def _consistent(self) -> "IeParams":
        if not 0 < self.b <= self.k:
            raise ValueError(f"need 0 < b <= k, got b={self.b}, k={self.k}")
        if self.modulus.bit_length() - 1 != self.k:
            raise ValueError(f"modulus degree must equal k={self.k}")
        if self.seed_element is not None and self.seed_element.modulus != self.modulus:
            raise ValueError("seed element lives in a different field")
        return self

    @property
    def message_bits(self) -> int:
        return self.t * self.b

    def to_json_dict(self) -> Dict[str, Any]:
        return {
            "N": self.N,
            "k": self.k,
            "b": self.b,
            "t": self.t,
            "nu": self.nu,
            "modulus": [(self.modulus >> j) & 1 for j in range(self.k + 1)],
        }

    @classmethod
    def from_json_dict(cls, data: Dict[str, Any]) -> "IeParams":
        modulus = sum(int(bit) << j for j, bit in enumerate(data["modulus"]))
        return cls(N=data["N"], k=data["k"], b=data["b"], t=data["t"], nu=data["nu"], modulus=modulus)
