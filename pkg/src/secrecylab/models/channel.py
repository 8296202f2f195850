"""Discrete memoryless channel model."""

from typing import Any, Dict, List

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

ROW_SUM_TOL = 1e-9


class DiscreteChannel(BaseModel):
    """Transition matrix with one row per input symbol and one column per output label."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    trans: np.ndarray

    @field_validator("trans", mode="before")
    @classmethod
    def _check_matrix(cls, v: Any) -> np.ndarray:
        arr = np.array(v, dtype=float)
        if arr.ndim != 2 or arr.shape[0] < 2 or arr.shape[1] < 1:
            raise ValueError(f"transition matrix must be q x |Y| with q >= 2, |Y| >= 1; got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("transition matrix contains non-finite entries")
        if np.any(arr < 0.0) or np.any(arr > 1.0 + ROW_SUM_TOL):
            raise ValueError("transition probabilities must lie in [0, 1]")
        sums = arr.sum(axis=1)
        if np.any(np.abs(sums - 1.0) > ROW_SUM_TOL):
            raise ValueError(f"rows must sum to 1, got {sums.tolist()}")
        arr = np.clip(arr / sums[:, None], 0.0, 1.0)
        arr.setflags(write=False)
        return arr

    @property
    def outputs(self) -> int:
        return int(self.trans.shape[1])

    @property
    def inputs(self) -> int:
        return int(self.trans.shape[0])

    def is_binary(self) -> bool:
        """Check if the channel has a binary input alphabet."""
        return self.inputs == 2

    def relabel(self, perm: np.ndarray) -> "DiscreteChannel":
        """Return the channel with output y moved to label perm[y]."""
        out = np.empty_like(self.trans)
        out[:, np.asarray(perm)] = self.trans
        return DiscreteChannel(trans=out)

    def to_json_dict(self) -> Dict[str, Any]:
        return {"outputs": self.outputs, "rows": self.trans.tolist()}

    @classmethod
    def from_json_dict(cls, data: Dict[str, Any]) -> "DiscreteChannel":
        rows: List[List[float]] = data["rows"]
        channel = cls(trans=rows)
        if "outputs" in data and int(data["outputs"]) != channel.outputs:
            raise ValueError(f"declared {data['outputs']} outputs but rows have {channel.outputs}")
        return channel


class ChannelMetrics(BaseModel):
    capacity: float
    bhattacharyya: float
    error_prob: float
