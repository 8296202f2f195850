"""Full-size reproduction runs at N=256 and N=512."""

import csv

import numpy as np
import pytest

from secrecylab.config import LabSettings
from secrecylab.models.simulation import Scheme, SimConfig
from secrecylab.services.dmc import bsc
from secrecylab.services.polarize import BoundsService
from secrecylab.services.reproduction import (
    FIG3_COLUMNS,
    TABLE1_COLUMNS,
    TABLE1_UNFROZEN,
    TABLE2_COLUMNS,
    ReproductionService,
)
from secrecylab.services.simulation import SimulationService

PUBLISHED_LEAKAGE = [58, 46, 33, 24, 13, 7]
PUBLISHED_CAPACITY = [0.323, 0.435, 0.525, 0.595, 0.648, 0.685]
PUBLISHED_DELTA = [11, 10, 9, 7, 5, 4]
PUBLISHED_TABLE2_DELTA = [6, 5, 4, 3, 2, 1]


@pytest.fixture(scope="module")
def lab(tmp_path_factory):
    settings = LabSettings(cache_dir=tmp_path_factory.mktemp("bounds"))
    simulation = SimulationService(settings, BoundsService(settings.cache_dir))
    return settings, simulation


def column(columns, rows, name):
    index = columns.index(name)
    return [row[index] for row in rows]


@pytest.mark.slow
class TestTable1:
    """Secrecy table for BSC(0.05) against six Eve channels."""

    def test_leakage_close_to_published(self, lab):
        """Test each leakage bound within max(20%, 3 bits) and strictly decreasing."""
        settings, simulation = lab
        columns, rows = ReproductionService(settings, simulation).table1()
        assert column(columns, rows, "status") == ["ok"] * 6
        leakage = column(columns, rows, "I_bar")
        for ours, published in zip(leakage, PUBLISHED_LEAKAGE):
            assert abs(ours - published) <= max(0.2 * published, 3.0)
        assert all(a > b for a, b in zip(leakage, leakage[1:]))

    def test_capacity_and_delta(self, lab):
        """Test the secrecy capacity column and the rounded semantic bound."""
        settings, simulation = lab
        columns, rows = ReproductionService(settings, simulation).table1()
        assert column(columns, rows, "C_s") == pytest.approx(PUBLISHED_CAPACITY, abs=1e-3)
        rounded = column(columns, rows, "delta_polar_pac_rounded")
        assert all(abs(a - b) <= 1 for a, b in zip(rounded, PUBLISHED_DELTA))
        ie = column(columns, rows, "delta_ie_raw")
        assert ie == pytest.approx([9.1553e-5] * 6, rel=1e-4)

    def test_unfrozen_budget(self, lab):
        """Test every row spends the same unfrozen budget, so r shrinks as k grows."""
        settings, simulation = lab
        service = ReproductionService(settings, simulation)
        designs = [service.table1_design(p_e, k) for p_e, k in [(0.15, 72), (0.30, 113), (0.40, 121)]]
        assert [d.k + d.r for d in designs] == [TABLE1_UNFROZEN] * 3
        assert [d.r for d in designs] == sorted((d.r for d in designs), reverse=True)

    def test_bob_fer_in_window(self, lab):
        """Test Bob's simulated FER for the p_e=0.40 row is consistent with the 0.05..0.06 window."""
        settings, simulation = lab
        design = ReproductionService(settings, simulation).table1_design(0.40, 121)
        config = SimConfig(scheme=Scheme.POLAR, N=256, k=121, p_b=0.05, p_e=0.40, random_size=design.r,
                           frames=3000, batch_size=500, seed=5)
        result = simulation.simulate_fer(config, design)
        assert result.ci_low <= 0.06 and result.ci_high >= 0.05

    def test_csv_output(self, lab, tmp_path):
        """Test the written CSV header and row count."""
        settings, simulation = lab
        csv_path, meta_path = ReproductionService(settings, simulation).reproduce("table1", tmp_path)
        with csv_path.open() as handle:
            rows = list(csv.reader(handle))
        assert rows[0] == TABLE1_COLUMNS
        assert len(rows) == 7
        assert meta_path.exists()


@pytest.mark.slow
class TestTable2:
    """Extractor comparison at N=512."""

    def test_rows(self, lab):
        """Test every row is feasible with the fixed extractor columns."""
        settings, simulation = lab
        columns, rows = ReproductionService(settings, simulation).table2()
        assert columns == TABLE2_COLUMNS
        assert len(rows) == 6
        assert column(columns, rows, "k") == [438] * 6
        assert column(columns, rows, "k_over_N") == pytest.approx([0.8546] * 6, abs=1e-4)
        assert column(columns, rows, "delta_ie_neglog2") == pytest.approx([20.04] * 6, abs=1e-2)
        assert column(columns, rows, "status") == ["ok"] * 6

    def test_polar_pac_delta(self, lab):
        """Test the polar/PAC bound, rounded up, decreases with p_e and matches the published column."""
        settings, simulation = lab
        columns, rows = ReproductionService(settings, simulation).table2()
        rounded = column(columns, rows, "delta_polar_pac_rounded")
        assert rounded == PUBLISHED_TABLE2_DELTA
        assert all(a >= b for a, b in zip(rounded, rounded[1:]))
        raw = column(columns, rows, "delta_polar_pac")
        assert raw == pytest.approx([5.95, 4.83, 3.74, 2.66, 1.58, 0.49], abs=0.15)


@pytest.mark.slow
class TestConstruction:
    """Bounds at the experiment size."""

    @pytest.mark.parametrize("p", [0.05, 0.3])
    def test_bounds_ordered(self, lab, p):
        """Test capacity_lb <= capacity_ub at every index for N=256, mu=64."""
        _, simulation = lab
        bounds = simulation.bounds.get_bounds(bsc(p), 8, 64)
        assert bounds.is_ordered()
        total = 256 * (1.0 - (-p * np.log2(p) - (1 - p) * np.log2(1 - p)))
        assert bounds.capacity_lb.sum() <= total + 1e-6 <= bounds.capacity_ub.sum() + 2e-6


@pytest.mark.slow
class TestFerCurves:
    """Bob's FER at the published operating points."""

    def test_polar_point(self, lab):
        """Test polar k=119 with the p_e=0.40 random bits lands near FER 0.045."""
        settings, simulation = lab
        r = ReproductionService(settings, simulation).table1_design(0.40, 121).r
        assert 119 + r == TABLE1_UNFROZEN - 2
        config = SimConfig(scheme=Scheme.POLAR, N=256, k=119, p_b=0.05, p_e=0.40, random_size=r,
                           frames=4000, batch_size=500, seed=1)
        result = simulation.simulate_fer(config)
        assert 0.02 <= result.fer <= 0.08

    def test_pac_beats_polar(self, lab):
        """Test PAC decoding at k=119 is no worse than polar on the same frames."""
        settings, simulation = lab
        base = SimConfig(scheme=Scheme.POLAR, N=256, k=119, p_b=0.05, p_e=0.40, frames=2000,
                         batch_size=500, seed=2)
        polar = simulation.simulate_fer(base)
        pac = simulation.simulate_fer(base.model_copy(update={"scheme": Scheme.PAC}))
        assert pac.fer <= polar.fer

    def test_pac_beats_polar_on_curve(self, lab):
        """Test PAC is no worse than polar at every fig3a rate and clearly better where errors are plentiful."""
        settings, simulation = lab
        columns, rows = ReproductionService(settings, simulation, frames=2000, seed=4).fig3("fig3a")
        assert columns == FIG3_COLUMNS
        assert column(columns, rows, "status") == ["ok"] * 7
        polar = [round(f * 2000) for f in column(columns, rows, "fer_polar")]
        pac = [round(f * 2000) for f in column(columns, rows, "fer_pac")]
        assert all(b <= a + 2 for a, b in zip(polar, pac))
        low = column(columns, rows, "fer_polar_low")
        plentiful = [i for i, a in enumerate(polar) if a >= 300]
        assert plentiful
        for i in plentiful:
            assert pac[i] / 2000 < low[i]


@pytest.mark.slow
class TestListSize:
    """SCL list size at N=64."""

    def test_fer_non_increasing_in_list_size(self, lab):
        """Test FER over the same frames does not grow as L doubles from 1 to 16."""
        _, simulation = lab
        base = SimConfig(scheme=Scheme.POLAR, N=64, k=32, p_b=0.08, mu=16, frames=2000, batch_size=500, seed=3)
        errors = [
            simulation.simulate_fer(base.model_copy(update={"list_size": 2 ** j})).errors_counted
            for j in range(5)
        ]
        assert all(b <= a + 2 for a, b in zip(errors, errors[1:]))
        assert errors[-1] < errors[0]


@pytest.mark.slow
class TestIntervalCoverage:
    """Clopper-Pearson intervals over repeated runs."""

    def test_resimulated_intervals_cover(self, lab):
        """Test at least 90 of 100 independently seeded runs cover the pooled FER."""
        _, simulation = lab
        base = SimConfig(scheme=Scheme.POLAR, N=64, k=32, p_b=0.08, mu=16, list_size=4, frames=300,
                         batch_size=300)
        results = [simulation.simulate_fer(base.model_copy(update={"seed": 1000 + s})) for s in range(100)]
        pooled = sum(r.errors_counted for r in results) / sum(r.frames_run for r in results)
        assert 0.0 < pooled < 1.0
        covered = sum(r.ci_low <= pooled <= r.ci_high for r in results)
        assert covered >= 90
