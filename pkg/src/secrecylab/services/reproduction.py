"""Regenerate the secrecy tables and FER curves as CSV plus a provenance record."""

import csv
import json
import logging
import math
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from .. import __version__
from ..config import LabSettings
from ..exceptions import InfeasibleDesignError, InvalidConfigError
from ..models.code import CodeKind, GeneratorPoly
from ..models.design import SecrecyDesign
from ..models.simulation import Scheme, SimConfig
from ..utils.formatters import format_row
from .dmc import binary_entropy, bsc
from .ie import check_ie_feasibility, ie_secrecy_bits, ie_semantic_bound
from .simulation import SimulationService
from .wiretap import design_sets, leakage_bound, secrecy_report, semantic_bound

logger = logging.getLogger(__name__)

TARGETS = ("table1", "table2", "fig3a", "fig3b")

TABLE1_N = 256
TABLE1_PB = 0.05
TABLE1_ROWS: List[Tuple[float, int]] = [
    (0.15, 72), (0.20, 92), (0.25, 104), (0.30, 113), (0.35, 117), (0.40, 121),
]
# Bob's SCL FER sits in the 0.05..0.06 window with 144 unfrozen indices at N = 256
TABLE1_UNFROZEN = 144
# k = 121 with no Eve-ranked random bits at p_e = 0.40 fixes the secured span
TABLE1_SPAN = 121

TABLE2_N = 512
TABLE2_PB = 0.005
TABLE2_NU = 0.1
TABLE2_ROWS: List[Tuple[float, float]] = [
    (0.391, 0.0413), (0.411, 0.0529), (0.431, 0.0621), (0.451, 0.0689), (0.471, 0.0735), (0.491, 0.0757),
]

FIG3_POINTS: Dict[str, Tuple[float, List[int]]] = {
    "fig3a": (0.40, [144, 133, 126, 119, 108, 100, 97]),
    "fig3b": (0.30, [137, 126, 119, 113, 108, 101, 93]),
}

TABLE1_COLUMNS = [
    "pe", "k", "I_bar", "C_s", "R_s", "R_eff", "delta_polar_pac_raw", "delta_ie_raw",
    "delta_polar_pac_rounded", "delta_ie_neglog2", "r", "bob_fer", "status",
]
TABLE2_COLUMNS = [
    "pe", "b_over_N", "k_over_N", "delta_ie", "delta_polar_pac",
    "delta_ie_neglog2", "delta_polar_pac_rounded", "I_bar", "k", "b", "status",
]
FIG3_COLUMNS = [
    "rate", "k", "r", "fer_polar", "fer_polar_low", "fer_polar_high",
    "fer_pac", "fer_pac_low", "fer_pac_high", "frames_polar", "frames_pac", "status",
]


class ReproductionService:
    """Drives the table and figure targets."""

    def __init__(self, settings: Optional[LabSettings] = None, simulation: Optional[SimulationService] = None,
                 frames: int = 0, seed: int = 0, calibrate: bool = False):
        self.settings = settings or LabSettings()
        self.simulation = simulation or SimulationService(self.settings)
        self.frames = frames
        self.seed = seed
        self.calibrate = calibrate
        self._unfrozen: Optional[int] = None

    def _config(self, **fields: Any) -> SimConfig:
        base = dict(
            N=TABLE1_N, p_b=TABLE1_PB, list_size=self.settings.list_size, frames=max(self.frames, 1),
            seed=self.seed, mu=self.settings.mu, g_octal=self.settings.generator_octal,
            batch_size=self.settings.batch_size, workers=self.settings.workers,
        )
        base.update(fields)
        return SimConfig(**base)

    def table1_unfrozen(self) -> int:
        """Bob's unfrozen count for Table 1 designs, optionally calibrated by simulation."""
        if self._unfrozen is None:
            if self.calibrate:
                if self.frames < 1:
                    raise InvalidConfigError("calibration needs --frames >= 1")
                self._unfrozen = self.simulation.calibrate_unfrozen(
                    self._config(k=1), self.settings.fer_window)
            else:
                self._unfrozen = TABLE1_UNFROZEN
        return self._unfrozen

    def table1_design(self, p_e: float, k: int) -> SecrecyDesign:
        bounds = self.simulation.bounds
        n = TABLE1_N.bit_length() - 1
        return design_sets(
            bounds.get_bounds(bsc(TABLE1_PB), n, self.settings.mu),
            bounds.get_bounds(bsc(p_e), n, self.settings.mu),
            k_target=k,
            bob_fer_budget=self.settings.fer_window,
            eve_threshold=self.settings.eve_threshold,
            max_unfrozen=self.table1_unfrozen(),
            secure_span=TABLE1_SPAN,
        )

    def table1(self) -> Tuple[List[str], List[List[Any]]]:
        rows = []
        for p_e, k in TABLE1_ROWS:
            try:
                design = self.table1_design(p_e, k)
            except InfeasibleDesignError as exc:
                rows.append([p_e, k] + [None] * (len(TABLE1_COLUMNS) - 3) + [f"infeasible: {exc}"])
                continue
            report = secrecy_report(design, TABLE1_PB, p_e)
            bob_fer = None
            if self.frames > 0:
                bob_fer = self.simulation.simulate_fer(
                    self._config(k=design.k, p_e=p_e, random_size=design.r), design).fer
            rows.append([
                p_e, report.k, report.leakage_ub, report.secrecy_capacity, report.rate,
                report.effective_rate, report.delta_raw, ie_semantic_bound(TABLE1_N),
                report.delta_rounded, ie_secrecy_bits(TABLE1_N), design.r, bob_fer, "ok",
            ])
        return TABLE1_COLUMNS, rows

    def table2(self) -> Tuple[List[str], List[List[Any]]]:
        bounds = self.simulation.bounds
        n = TABLE2_N.bit_length() - 1
        bob = bounds.get_bounds(bsc(TABLE2_PB), n, self.settings.mu)
        rate_budget = 1.0 - binary_entropy(TABLE2_PB) - TABLE2_NU
        rows = []
        for p_e, b_over_N in TABLE2_ROWS:
            feasibility = check_ie_feasibility(TABLE2_N, TABLE2_PB, TABLE2_NU, b_over_N)
            status = "ok" if feasibility.feasible else f"infeasible: {feasibility.reason}"
            leakage = delta = rounded = None
            try:
                design = design_sets(
                    bob,
                    bounds.get_bounds(bsc(p_e), n, self.settings.mu),
                    k_target=feasibility.k,
                    bob_fer_budget=self.settings.fer_window,
                    max_unfrozen=feasibility.k,
                    random_size=0,
                )
                leakage = leakage_bound(design)
                delta = semantic_bound(leakage)
                # this table rounds bounds up
                rounded = math.ceil(delta)
            except InfeasibleDesignError as exc:
                status = f"infeasible: {exc}"
            rows.append([
                p_e, b_over_N, rate_budget, ie_semantic_bound(TABLE2_N), delta,
                ie_secrecy_bits(TABLE2_N), rounded, leakage, feasibility.k, feasibility.b, status,
            ])
        return TABLE2_COLUMNS, rows

    def fig3(self, target: str) -> Tuple[List[str], List[List[Any]]]:
        if self.frames < 1:
            raise InvalidConfigError(f"{target} needs --frames >= 1")
        p_e, ks = FIG3_POINTS[target]
        table_k = dict(TABLE1_ROWS)[p_e]
        r = self.table1_design(p_e, table_k).r
        g = GeneratorPoly.from_octal(self.settings.generator_octal)
        rows = []
        for k in ks:
            try:
                polar_cfg = self._config(k=k, p_e=p_e, random_size=r, scheme=Scheme.POLAR)
                design = self.simulation.design_for(polar_cfg)
                polar = self.simulation.simulate_fer(polar_cfg, design)
                pac_design = design.model_copy(update={"kind": CodeKind.PAC, "g": g})
                pac = self.simulation.simulate_fer(polar_cfg.model_copy(update={"scheme": Scheme.PAC}), pac_design)
            except InfeasibleDesignError as exc:
                rows.append([k / TABLE1_N, k, r] + [None] * 8 + [f"infeasible: {exc}"])
                continue
            rows.append([
                k / TABLE1_N, k, r, polar.fer, polar.ci_low, polar.ci_high,
                pac.fer, pac.ci_low, pac.ci_high, polar.frames_run, pac.frames_run, "ok",
            ])
        return FIG3_COLUMNS, rows

    def provenance(self, target: str) -> Dict[str, Any]:
        return {
            "target": target,
            "tool_version": __version__,
            "created_at": datetime.now(timezone.utc).isoformat(),
            "seed": self.seed,
            "frames": self.frames,
            "mu": self.settings.mu,
            "list_size": self.settings.list_size,
            "generator_octal": self.settings.generator_octal,
            "eve_threshold": self.settings.eve_threshold,
            "fer_window": list(self.settings.fer_window),
            "unfrozen": self._unfrozen,
            "secure_span": TABLE1_SPAN,
            "calibrated": self.calibrate,
        }

    def reproduce(self, target: str, out_dir: Path) -> List[Path]:
        """Write <target>.csv and <target>.provenance.json under out_dir."""
        if target not in TARGETS:
            raise InvalidConfigError(f"unknown target {target!r}; choose from {', '.join(TARGETS)}")
        if target == "table1":
            columns, rows = self.table1()
        elif target == "table2":
            columns, rows = self.table2()
        else:
            columns, rows = self.fig3(target)

        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        csv_path = out_dir / f"{target}.csv"
        with csv_path.open("w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(columns)
            for row in rows:
                writer.writerow(format_row(row))
        meta_path = out_dir / f"{target}.provenance.json"
        meta_path.write_text(json.dumps(self.provenance(target), indent=2))
        logger.info("wrote %s (%d rows)", csv_path, len(rows))
        return [csv_path, meta_path]
