"""Polar and PAC code descriptions."""

from enum import Enum
from typing import Any, Dict, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError, field_validator, model_validator

from ..exceptions import InvalidCodeError
from ..utils.formatters import format_bits


class CodeKind(str, Enum):
    POLAR = "polar"
    PAC = "pac"


class GeneratorPoly(BaseModel):
    """Convolution generator g(D) = g_0 + g_1 D + ... + g_m D^m."""

    model_config = ConfigDict(frozen=True)

    coeffs: Tuple[int, ...]

    @field_validator("coeffs")
    @classmethod
    def _check_coeffs(cls, v: Tuple[int, ...]) -> Tuple[int, ...]:
        if len(v) < 2:
            raise ValueError("generator must have memory m >= 1")
        if any(c not in (0, 1) for c in v):
            raise ValueError("generator coefficients must be bits")
        if v[0] != 1 or v[-1] != 1:
            raise ValueError("generator must have g_0 = g_m = 1")
        return v

    @property
    def memory(self) -> int:
        return len(self.coeffs) - 1

    @property
    def taps(self) -> np.ndarray:
        """Feedback taps g_1..g_m."""
        return np.array(self.coeffs[1:], dtype=np.uint8)

    def as_array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=np.uint8)

    @classmethod
    def from_octal(cls, text: str) -> "GeneratorPoly":
        """Parse an octal string whose binary digits read g_0..g_m."""
        try:
            value = int(text, 8)
        except (TypeError, ValueError):
            raise InvalidCodeError(f"generator {text!r} is not an octal number") from None
        if value <= 0:
            raise InvalidCodeError(f"invalid octal generator {text!r}")
        try:
            return cls(coeffs=tuple(int(c) for c in bin(value)[2:]))
        except ValidationError as exc:
            raise InvalidCodeError(f"generator {text!r}: {exc.errors()[0]['msg']}") from None

    def to_octal(self) -> str:
        return format(int(format_bits(self.coeffs), 2), "o")


class CodeSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    N: int
    profile: Tuple[int, ...] = ()
    kind: CodeKind = CodeKind.POLAR
    g: Optional[GeneratorPoly] = None

    @field_validator("N")
    @classmethod
    def _power_of_two(cls, v: int) -> int:
        if v < 1 or v & (v - 1):
            raise ValueError(f"block length must be a power of two, got {v}")
        return v

    @field_validator("profile", mode="before")
    @classmethod
    def _sorted_profile(cls, v: Any) -> Tuple[int, ...]:
        return tuple(sorted(int(i) for i in v))

    @model_validator(mode="after")
    def _check_profile(self) -> "CodeSpec":
        if len(set(self.profile)) != len(self.profile):
            raise ValueError("profile contains duplicate indices")
        if self.profile and (self.profile[0] < 0 or self.profile[-1] >= self.N):
            raise ValueError(f"profile indices must lie in 0..{self.N - 1}")
        if self.g is not None and self.g.memory >= self.N and self.N > 1:
            raise ValueError(f"generator memory {self.g.memory} must be below N={self.N}")
        return self

    @property
    def n(self) -> int:
        return self.N.bit_length() - 1

    @property
    def k(self) -> int:
        return len(self.profile)

    @property
    def precoder(self) -> Optional[GeneratorPoly]:
        """Generator used by the encoder; None means identity."""
        return self.g if self.kind == CodeKind.PAC else None

    def frozen_mask(self) -> np.ndarray:
        mask = np.ones(self.N, dtype=bool)
        mask[list(self.profile)] = False
        return mask

    def with_profile(self, profile) -> "CodeSpec":
        return CodeSpec(N=self.N, profile=profile, kind=self.kind, g=self.g)

    def to_json_dict(self) -> Dict[str, Any]:
        return {
            "N": self.N,
            "kind": self.kind.value,
            "profile": list(self.profile),
            "g": list(self.g.coeffs) if self.g is not None else [],
        }

    @classmethod
    def from_json_dict(cls, data: Dict[str, Any]) -> "CodeSpec":
        g = data.get("g") or None
        return cls(
            N=data["N"],
            kind=CodeKind(data.get("kind", "polar")),
            profile=data.get("profile", []),
            g=GeneratorPoly(coeffs=tuple(g)) if g else None,
        )
