"""Pytest configuration and fixtures."""

import numpy as np
import pytest

from secrecylab.config import LabSettings
from secrecylab.models.channel import DiscreteChannel
from secrecylab.services.dmc import bsc
from secrecylab.services.polarize import BoundsService, construct_bounds


@pytest.fixture
def bsc05():
    """Bob's channel of the N=256 experiments."""
    return bsc(0.05)


@pytest.fixture
def asymmetric_channel():
    """A binary channel whose rows are not permutations of each other."""
    return DiscreteChannel(trans=[[0.7, 0.3], [0.6, 0.4]])


@pytest.fixture
def rng():
    """Seeded generator for property tests."""
    return np.random.default_rng(20240607)


@pytest.fixture(scope="session")
def small_bob_bounds():
    """Bounds for BSC(0.05) at N=16, mu=8."""
    return construct_bounds(bsc(0.05), 4, 8)


@pytest.fixture(scope="session")
def small_eve_bounds():
    """Bounds for BSC(0.3) at N=16, mu=8."""
    return construct_bounds(bsc(0.3), 4, 8)


@pytest.fixture
def settings(tmp_path):
    """Settings with a private bounds cache and small construction budget."""
    return LabSettings(mu=8, list_size=4, batch_size=50, cache_dir=tmp_path / "cache")


@pytest.fixture
def bounds_service(tmp_path):
    """BoundsService writing to a temporary cache directory."""
    return BoundsService(tmp_path / "bounds")
