"""Seeded Monte Carlo frame-error-rate simulation."""

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel
from scipy.stats import beta

from ..config import LabSettings
from ..exceptions import DecodingFailure, InvalidConfigError
from ..models.code import CodeKind, CodeSpec, GeneratorPoly
from ..models.design import SecrecyDesign
from ..models.field import IeParams
from ..models.simulation import Scheme, SimConfig, SimResult
from ..utils.formatters import format_duration
from ..utils.galois import find_irreducible
from ..utils.rng import frame_generator
from .codes import reliability_profile
from .dmc import bsc
from .ie import draw_seed, ie_decode, ie_encode
from .polarize import BoundsService
from .scl import SclDecoder, bsc_llrs
from .wiretap import coset_encode, design_sets

logger = logging.getLogger(__name__)


def clopper_pearson(errors: int, frames: int, confidence: float = 0.95) -> Tuple[float, float]:
    """Exact binomial interval for errors / frames."""
    if frames <= 0:
        return 0.0, 1.0
    alpha = 1.0 - confidence
    low = 0.0 if errors == 0 else float(beta.ppf(alpha / 2, errors, frames - errors + 1))
    high = 1.0 if errors == frames else float(beta.ppf(1 - alpha / 2, errors + 1, frames - errors))
    return low, high


class BatchTask(BaseModel):
    """Frames [start, stop) of one run; everything a worker needs."""

    scheme: Scheme
    spec: CodeSpec
    A: Tuple[int, ...]
    R: Tuple[int, ...]
    p_b: float
    list_size: int
    seed: int
    start: int
    stop: int
    ie_b: Optional[int] = None
    ie_t: int = 1
    modulus: Optional[int] = None


@lru_cache(maxsize=16)
def _decoder(spec_json: str, list_size: int) -> SclDecoder:
    return SclDecoder(CodeSpec.model_validate_json(spec_json), list_size)


def _coset_frame(task: BatchTask, design: SecrecyDesign, decoder: SclDecoder, frame: int) -> bool:
    rng = frame_generator(task.seed, frame)
    msg = rng.integers(0, 2, size=design.k, dtype=np.uint8)
    codeword = coset_encode(design, msg, rng)
    noise = (rng.random(design.N) < task.p_b).astype(np.uint8)
    result = decoder.decode_llrs(bsc_llrs(codeword ^ noise, task.p_b))
    return bool(np.any(result.u[list(design.A)] != msg))


def _ie_frame(task: BatchTask, decoder: SclDecoder, frame: int) -> bool:
    rng = frame_generator(task.seed, frame)
    params = IeParams(N=task.spec.N, k=task.spec.k, b=task.ie_b, t=task.ie_t, modulus=task.modulus)
    params = params.model_copy(update={"seed_element": draw_seed(task.modulus, rng)})
    msg = rng.integers(0, 2, size=params.message_bits, dtype=np.uint8)
    blocks = ie_encode(params, msg, task.spec, rng)
    noise = (rng.random(blocks.shape) < task.p_b).astype(np.uint8)
    received = blocks ^ noise
    try:
        decoded = ie_decode(params, received, lambda y: decoder.decode_llrs(bsc_llrs(y, task.p_b)).data)
    except DecodingFailure:
        return True
    return bool(np.any(decoded != msg))


def run_batch(task: BatchTask) -> Tuple[int, int]:
    """Simulate one batch; returns (frames, frame errors)."""
    decoder = _decoder(task.spec.model_dump_json(), task.list_size)
    errors = 0
    if task.scheme == Scheme.IE:
        for frame in range(task.start, task.stop):
            errors += _ie_frame(task, decoder, frame)
    else:
        N = task.spec.N
        used = set(task.A) | set(task.R)
        design = SecrecyDesign(
            N=N, A=task.A, R=task.R, B=[i for i in range(N) if i not in used],
            kind=task.spec.kind, g=task.spec.g,
        )
        for frame in range(task.start, task.stop):
            errors += _coset_frame(task, design, decoder, frame)
    return task.stop - task.start, errors


class SimulationService:
    """Builds designs from cached bounds and runs batched FER simulations."""

    def __init__(self, settings: Optional[LabSettings] = None, bounds: Optional[BoundsService] = None):
        self.settings = settings or LabSettings()
        self.bounds = bounds or BoundsService(self.settings.cache_dir)

    def design_for(self, config: SimConfig) -> SecrecyDesign:
        """Coset design with k message bits and random_size random bits."""
        n = config.N.bit_length() - 1
        bob = self.bounds.get_bounds(bsc(config.p_b), n, config.mu)
        eve = self.bounds.get_bounds(bsc(config.p_e), n, config.mu) if config.p_e is not None else bob
        kind = CodeKind.PAC if config.scheme == Scheme.PAC else CodeKind.POLAR
        return design_sets(
            bob,
            eve,
            k_target=config.k,
            max_unfrozen=config.k + config.random_size,
            random_size=config.random_size,
            kind=kind,
            g=GeneratorPoly.from_octal(config.g_octal) if kind == CodeKind.PAC else None,
        )

    def _tasks(self, config: SimConfig, design: Optional[SecrecyDesign]) -> Iterator[BatchTask]:
        common = dict(scheme=config.scheme, p_b=config.p_b, list_size=config.list_size, seed=config.seed)
        if config.scheme == Scheme.IE:
            n = config.N.bit_length() - 1
            bob = self.bounds.get_bounds(bsc(config.p_b), n, config.mu)
            spec = CodeSpec(N=config.N, profile=reliability_profile(bob, config.k))
            extra = dict(spec=spec, A=spec.profile, R=(), ie_b=config.ie_b, ie_t=config.ie_t,
                         modulus=find_irreducible(config.k))
        else:
            design = design or self.design_for(config)
            extra = dict(spec=design.code_spec(), A=design.A, R=design.R)
        for start in range(0, config.frames, config.batch_size):
            yield BatchTask(start=start, stop=min(start + config.batch_size, config.frames), **common, **extra)

    @staticmethod
    def _run(tasks: List[BatchTask], workers: int) -> Iterator[Tuple[int, int]]:
        """Batch results in submission order."""
        if workers <= 1:
            for task in tasks:
                yield run_batch(task)
            return
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for offset in range(0, len(tasks), workers):
                wave = [pool.submit(run_batch, task) for task in tasks[offset:offset + workers]]
                for future in wave:
                    yield future.result()

    def simulate_fer(self, config: SimConfig, design: Optional[SecrecyDesign] = None) -> SimResult:
        """Run frames in fixed-size batches; adaptive runs stop at a batch boundary."""
        if design is not None and design.k != config.k:
            raise InvalidConfigError(f"design carries k={design.k}, config asks for k={config.k}")
        started = time.perf_counter()
        tasks = list(self._tasks(config, design))
        frames = errors = 0
        for done, wrong in self._run(tasks, config.workers):
            frames += done
            errors += wrong
            logger.debug("batch done: %d frames, %d errors", frames, errors)
            if config.adaptive and frames >= config.min_frames and errors >= config.target_errors:
                break
        low, high = clopper_pearson(errors, frames)
        elapsed = time.perf_counter() - started
        result = SimResult(
            fer=errors / frames,
            ci_low=low,
            ci_high=high,
            frames_run=frames,
            errors_counted=errors,
            wall_time=elapsed,
        )
        logger.info("%s N=%d k=%d p_b=%g: FER %.4g [%.4g, %.4g] over %d frames in %s",
                    config.scheme.value, config.N, config.k, config.p_b, result.fer,
                    low, high, frames, format_duration(elapsed))
        return result

    def calibrate_unfrozen(self, config: SimConfig, window: Sequence[float]) -> int:
        """Largest unfrozen count whose simulated Bob FER stays at or below the window's upper end."""
        hi = window[1]
        lo_k, hi_k = 0, config.N
        while lo_k < hi_k:
            mid = (lo_k + hi_k + 1) // 2
            trial = config.model_copy(update={"k": mid, "random_size": 0, "p_e": None})
            fer = self.simulate_fer(trial).fer
            logger.info("calibration step: %d unfrozen -> FER %.4g", mid, fer)
            if fer <= hi:
                lo_k = mid
            else:
                hi_k = mid - 1
        return lo_k
