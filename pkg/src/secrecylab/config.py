"""Lab-wide settings."""

import os
from pathlib import Path
from typing import Tuple

from pydantic import BaseModel, Field, field_validator

from .models.code import GeneratorPoly

CACHE_ENV_VAR = "WIRETAP_CACHE_DIR"


def _default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "secrecylab"


class LabSettings(BaseModel):
    mu: int = 64
    list_size: int = 16
    generator_octal: str = "133"
    eve_threshold: float = 1e-3
    fer_window: Tuple[float, float] = (0.05, 0.06)
    enumeration_budget: int = Field(default=2 ** 26, ge=1)
    batch_size: int = 1000
    workers: int = 1
    cache_dir: Path = Field(default_factory=_default_cache_dir)

    @field_validator("mu")
    @classmethod
    def _even_mu(cls, v: int) -> int:
        if v < 2 or v % 2:
            raise ValueError(f"mu must be an even integer >= 2, got {v}")
        return v

    @field_validator("list_size", "batch_size", "workers")
    @classmethod
    def _positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"must be >= 1, got {v}")
        return v

    @field_validator("generator_octal")
    @classmethod
    def _octal_generator(cls, v: str) -> str:
        GeneratorPoly.from_octal(v)
        return v

    @field_validator("fer_window")
    @classmethod
    def _ordered_window(cls, v: Tuple[float, float]) -> Tuple[float, float]:
        lo, hi = v
        if not 0.0 <= lo <= hi <= 1.0:
            raise ValueError(f"FER window must satisfy 0 <= lo <= hi <= 1, got {v}")
        return v


def load_settings(**overrides) -> LabSettings:
    """Build settings from the environment plus explicit overrides."""
    values = {k: v for k, v in overrides.items() if v is not None}
    return LabSettings(**values)
