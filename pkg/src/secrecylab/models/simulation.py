"""Monte Carlo run configuration and results."""

from enum import Enum
from typing import Optional, Tuple

from pydantic import BaseModel, Field, model_validator

from ..utils.validators import validate_wiretap_pair


class Scheme(str, Enum):
    POLAR = "polar"
    PAC = "pac"
    IE = "ie"


class SimConfig(BaseModel):
    scheme: Scheme = Scheme.POLAR
    N: int = 256
    k: int
    p_b: float
    p_e: Optional[float] = None
    list_size: int = Field(default=16, ge=1)
    frames: int = Field(default=10_000, ge=1)
    seed: int = Field(default=0, ge=0, lt=2 ** 64)
    mu: int = 64
    g_octal: str = "133"
    random_size: int = Field(default=0, ge=0)
    adaptive: bool = False
    min_frames: int = Field(default=1000, ge=1)
    target_errors: int = Field(default=100, ge=1)
    batch_size: int = Field(default=1000, ge=1)
    workers: int = Field(default=1, ge=1)
    ie_b: Optional[int] = None
    ie_t: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _check(self) -> "SimConfig":
        if self.N < 1 or self.N & (self.N - 1):
            raise ValueError(f"N must be a power of two, got {self.N}")
        if not 0 < self.p_b < 1:
            raise ValueError(f"p_b must lie in (0, 1), got {self.p_b}")
        if self.p_e is not None:
            ok, error = validate_wiretap_pair(self.p_b, self.p_e)
            if not ok:
                raise ValueError(f"wiretap runs need 0 < p_b < p_e < 1/2: {error}")
        if not 0 <= self.k <= self.N or self.k + self.random_size > self.N:
            raise ValueError(f"k={self.k} plus random_size={self.random_size} exceeds N={self.N}")
        if self.scheme == Scheme.IE:
            if self.ie_b is None or not 0 < self.ie_b <= self.k:
                raise ValueError("ie runs need 0 < ie_b <= k")
        return self


class SimResult(BaseModel):
    fer: float
    ci_low: float
    ci_high: float
    frames_run: int
    errors_counted: int
    wall_time: float

    @property
    def interval(self) -> Tuple[float, float]:
        return self.ci_low, self.ci_high
