"""Per-index bounds for synthesized bit channels."""

from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from .channel import DiscreteChannel


class LowerBound(BaseModel):
    capacity_lb: float
    error_prob_ub: float
    bhattacharyya_ub: float


class UpperBound(BaseModel):
    capacity_ub: float
    error_prob_lb: float


class BitChannelBounds(BaseModel):
    """Degraded (lower) and upgraded (upper) bounds in natural index order."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n: int
    mu: int
    capacity_lb: np.ndarray
    error_prob_ub: np.ndarray
    bhattacharyya_ub: np.ndarray
    capacity_ub: np.ndarray
    error_prob_lb: np.ndarray
    channel: Optional[DiscreteChannel] = None

    @field_validator("capacity_lb", "error_prob_ub", "bhattacharyya_ub", "capacity_ub", "error_prob_lb", mode="before")
    @classmethod
    def _as_vector(cls, v: Any) -> np.ndarray:
        arr = np.array(v, dtype=float).reshape(-1)
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def _check_lengths(self) -> "BitChannelBounds":
        size = 1 << self.n
        for name in ("capacity_lb", "error_prob_ub", "bhattacharyya_ub", "capacity_ub", "error_prob_lb"):
            if getattr(self, name).shape[0] != size:
                raise ValueError(f"{name} must have {size} entries")
        return self

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def lower(self) -> List[LowerBound]:
        return [
            LowerBound(capacity_lb=c, error_prob_ub=e, bhattacharyya_ub=z)
            for c, e, z in zip(self.capacity_lb.tolist(), self.error_prob_ub.tolist(), self.bhattacharyya_ub.tolist())
        ]

    @property
    def upper(self) -> List[UpperBound]:
        return [
            UpperBound(capacity_ub=c, error_prob_lb=e)
            for c, e in zip(self.capacity_ub.tolist(), self.error_prob_lb.tolist())
        ]

    def is_ordered(self, tol: float = 1e-9) -> bool:
        """Check capacity_lb <= capacity_ub at every index."""
        return bool(np.all(self.capacity_lb <= self.capacity_ub + tol))

    def to_json_dict(self) -> Dict[str, Any]:
        return {
            "channel": self.channel.to_json_dict() if self.channel is not None else None,
            "n": self.n,
            "mu": self.mu,
            "lower": [b.model_dump() for b in self.lower],
            "upper": [b.model_dump() for b in self.upper],
        }

    @classmethod
    def from_json_dict(cls, data: Dict[str, Any]) -> "BitChannelBounds":
        lower = data["lower"]
        upper = data["upper"]
        channel = data.get("channel")
        return cls(
            n=data["n"],
            mu=data["mu"],
            capacity_lb=[b["capacity_lb"] for b in lower],
            error_prob_ub=[b["error_prob_ub"] for b in lower],
            bhattacharyya_ub=[b["bhattacharyya_ub"] for b in lower],
            capacity_ub=[b["capacity_ub"] for b in upper],
            error_prob_lb=[b["error_prob_lb"] for b in upper],
            channel=DiscreteChannel.from_json_dict(channel) if channel else None,
        )
