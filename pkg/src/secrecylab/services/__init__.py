"""Services for secrecylab."""

from .polarize import BoundsService
from .simulation import SimulationService
from .reproduction import ReproductionService

__all__ = ["BoundsService", "SimulationService", "ReproductionService"]
