"""Data models for secrecylab."""

from .channel import DiscreteChannel, ChannelMetrics
from .bounds import BitChannelBounds, LowerBound, UpperBound
from .code import CodeKind, CodeSpec, GeneratorPoly
from .design import SecrecyDesign, SecrecyReport
from .field import FieldElement, IeParams
from .simulation import Scheme, SimConfig, SimResult

__all__ = [
    "DiscreteChannel", "ChannelMetrics",
    "BitChannelBounds", "LowerBound", "UpperBound",
    "CodeKind", "CodeSpec", "GeneratorPoly",
    "SecrecyDesign", "SecrecyReport",
    "FieldElement", "IeParams",
    "Scheme", "SimConfig", "SimResult",
]
