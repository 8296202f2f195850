"""Command handlers: one per subcommand, each returning a response dict."""

import argparse
import json
import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from pydantic import ValidationError

from ..config import LabSettings
from ..exceptions import InfeasibleDesignError, InvalidConfigError, SecrecyLabError
from ..models.code import CodeKind, GeneratorPoly
from ..models.design import SecrecyDesign
from ..models.simulation import Scheme, SimConfig
from ..services.dmc import bsc, capacity
from ..services.ie import (
    check_ie_feasibility,
    ie_block_fer_bound,
    ie_mi_bound,
    ie_secrecy_bits,
    ie_semantic_bound,
)
from ..services.oracle import run_verification_suite
from ..services.polarize import BoundsService, ordering_agreement
from ..services.reproduction import ReproductionService
from ..services.simulation import SimulationService
from ..services.wiretap import bob_union_bound, design_sets, secrecy_report
from ..utils.validators import validate_blocklength, validate_probability

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INFEASIBLE = 2
EXIT_INVALID_CONFIG = 3

DEFAULT_SIM_FRAMES = 10_000


class BaseHandler:
    """Base command handler."""

    command = ""

    def __init__(self, settings: LabSettings, bounds: Optional[BoundsService] = None):
        self.settings = settings
        self.bounds = bounds or BoundsService(settings.cache_dir)
        self.request_count = 0

    def _log_request(self, args: argparse.Namespace) -> None:
        self.request_count += 1
        logger.debug("%s %s", self.command, {k: v for k, v in vars(args).items() if k != "handler"})

    def _format_response(self, data: Any, status: int = EXIT_OK) -> Dict[str, Any]:
        return {
            "status": status,
            "data": data,
            "timestamp": datetime.now(timezone.utc).isoformat(),
        }

    def _format_error(self, error: Exception, status: int) -> Dict[str, Any]:
        return {
            "status": status,
            "error": str(error),
            "kind": type(error).__name__,
        }

    def _write_json(self, path: Optional[str], payload: Dict[str, Any]) -> Optional[str]:
        if not path:
            return None
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(json.dumps(payload, indent=2))
        return str(target)

    def _exponent(self, N: int) -> int:
        ok, error = validate_blocklength(N)
        if not ok:
            raise InvalidConfigError(error)
        return N.bit_length() - 1

    def _probability(self, name: str, value: Optional[float]) -> float:
        if value is None:
            raise InvalidConfigError(f"--{name} is required")
        ok, error = validate_probability(value)
        if not ok:
            raise InvalidConfigError(f"--{name}: {error}")
        return value

    def handle(self, args: argparse.Namespace) -> Tuple[int, Any]:
        raise NotImplementedError

    def execute(self, args: argparse.Namespace) -> Tuple[int, Dict[str, Any]]:
        """Run the command, mapping domain errors onto exit codes."""
        self._log_request(args)
        try:
            status, data = self.handle(args)
        except InfeasibleDesignError as exc:
            return EXIT_INFEASIBLE, self._format_error(exc, EXIT_INFEASIBLE)
        except (ValidationError, SecrecyLabError) as exc:
            return EXIT_INVALID_CONFIG, self._format_error(exc, EXIT_INVALID_CONFIG)
        return status, self._format_response(data, status)


class ConstructHandler(BaseHandler):
    """Bit-channel bounds for BSC(--pb)."""

    command = "construct"

    def handle(self, args: argparse.Namespace) -> Tuple[int, Any]:
        p = self._probability("pb", args.pb)
        W = bsc(p)
        bounds = self.bounds.get_bounds(W, self._exponent(args.N), args.mu)
        agreement, _ = ordering_agreement(bounds)
        written = self._write_json(args.out, bounds.to_json_dict())
        return EXIT_OK, {
            "N": bounds.N,
            "mu": bounds.mu,
            "capacity": capacity(W),
            "sum_capacity_lb": float(bounds.capacity_lb.sum()),
            "sum_capacity_ub": float(bounds.capacity_ub.sum()),
            "ordered": bounds.is_ordered(),
            "ordering_agreement": agreement,
            "out": written,
        }


class DesignHandler(BaseHandler):
    """Index-set design for the wiretap pair (--pb, --pe)."""

    command = "design"

    def build(self, args: argparse.Namespace) -> SecrecyDesign:
        p_b = self._probability("pb", args.pb)
        p_e = self._probability("pe", args.pe)
        if p_b >= p_e:
            raise InvalidConfigError(f"need p_b < p_e, got {p_b} and {p_e}")
        n = self._exponent(args.N)
        kind = CodeKind.PAC if args.scheme == Scheme.PAC.value else CodeKind.POLAR
        window = tuple(args.fer_window) if args.fer_window else self.settings.fer_window
        return design_sets(
            self.bounds.get_bounds(bsc(p_b), n, args.mu),
            self.bounds.get_bounds(bsc(p_e), n, args.mu),
            k_target=args.k,
            bob_fer_budget=window,
            eve_threshold=args.eve_threshold if args.eve_threshold is not None else self.settings.eve_threshold,
            max_unfrozen=args.max_unfrozen,
            random_size=args.random_size,
            kind=kind,
            g=GeneratorPoly.from_octal(args.g) if kind == CodeKind.PAC else None,
        )

    def handle(self, args: argparse.Namespace) -> Tuple[int, Any]:
        design = self.build(args)
        payload = design.to_json_dict()
        written = self._write_json(args.out, payload)
        return EXIT_OK, {**payload, "union_bound": bob_union_bound(design), "out": written}


class BoundHandler(DesignHandler):
    """Leakage and semantic-secrecy bound of a design."""

    command = "bound"

    def handle(self, args: argparse.Namespace) -> Tuple[int, Any]:
        design = self.build(args)
        report = secrecy_report(design, args.pb, args.pe)
        return EXIT_OK, report.model_dump()


class SimulateHandler(BaseHandler):
    """Monte Carlo FER of Bob's decoder."""

    command = "simulate"

    def handle(self, args: argparse.Namespace) -> Tuple[int, Any]:
        if args.k is None:
            raise InvalidConfigError("--k is required")
        config = SimConfig(
            scheme=Scheme(args.scheme),
            N=args.N,
            k=args.k,
            p_b=self._probability("pb", args.pb),
            p_e=args.pe,
            list_size=args.list,
            frames=args.frames if args.frames is not None else DEFAULT_SIM_FRAMES,
            seed=args.seed,
            mu=args.mu,
            g_octal=args.g,
            random_size=args.random_size or 0,
            adaptive=args.adaptive,
            workers=args.workers,
            batch_size=self.settings.batch_size,
            ie_b=args.ie_b,
            ie_t=args.ie_t,
        )
        service = SimulationService(self.settings, self.bounds)
        result = service.simulate_fer(config)
        payload = {"config": config.model_dump(mode="json"), "result": result.model_dump()}
        written = self._write_json(args.out, payload)
        return EXIT_OK, {**payload, "out": written}


class IeBoundHandler(BaseHandler):
    """Extractor semantic-secrecy and leakage bounds."""

    command = "ie-bound"

    def handle(self, args: argparse.Namespace) -> Tuple[int, Any]:
        delta = ie_semantic_bound(args.N)
        data: Dict[str, Any] = {
            "N": args.N,
            "delta": delta,
            "neglog2_delta": ie_secrecy_bits(args.N),
            "mi_bound": ie_mi_bound(min(delta, 1.0), args.N),
        }
        if args.pb is not None:
            feasibility = check_ie_feasibility(args.N, args.pb, args.nu, args.b_over_n)
            data["feasibility"] = feasibility.model_dump()
        if args.block_fer is not None:
            ok, error = validate_probability(args.block_fer, open_interval=False)
            if not ok:
                raise InvalidConfigError(f"--block-fer: {error}")
            data["message_fer_bound"] = ie_block_fer_bound(args.block_fer, args.ie_t)
        return EXIT_OK, data


class VerifyHandler(BaseHandler):
    """Exhaustive oracle checks."""

    command = "verify"

    def handle(self, args: argparse.Namespace) -> Tuple[int, Any]:
        records = run_verification_suite(
            full=args.full, seed=args.seed, budget=self.settings.enumeration_budget)
        report: List[Dict[str, Any]] = [r.model_dump() for r in records]
        written = self._write_json(args.out, {"checks": report})
        failed = [r for r in report if not r["passed"]]
        status = EXIT_OK if not failed else EXIT_CHECK_FAILED
        return status, {"total": len(report), "failed": failed, "out": written}


class ReproduceHandler(BaseHandler):
    """Table and figure regeneration."""

    command = "reproduce"

    def handle(self, args: argparse.Namespace) -> Tuple[int, Any]:
        service = ReproductionService(
            self.settings,
            SimulationService(self.settings, self.bounds),
            frames=args.frames or 0,
            seed=args.seed,
            calibrate=args.calibrate,
        )
        paths = service.reproduce(args.target, Path(args.out or "results"))
        return EXIT_OK, {"target": args.target, "files": [str(p) for p in paths]}


HANDLERS = {
    cls.command: cls
    for cls in (ConstructHandler, DesignHandler, SimulateHandler, BoundHandler,
                IeBoundHandler, VerifyHandler, ReproduceHandler)
}
