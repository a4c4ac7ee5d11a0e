"""Rank sweeps over datasets and algorithms, one timed factorization per record."""
import hashlib
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..data import resolve
from ..dense import singular_values, svd, truncated_svd_error
from ..id import DEFAULT_OVERSAMPLING, diagnostics, id_auto

log = logging.getLogger(__name__)

ALGORITHMS = ("svd_baseline", "det_id", "rand_id")
PAPER_RANKS = tuple(range(10, 471, 20))
SUMMARY_RANK = 190


@dataclass
class ExperimentRecord:
    dataset: str
    algorithm: str
    rank: int
    repetition: int
    seed: int
    relative_error: float
    wall_time_s: float
    max_abs_z: float | None = None
    status: str = "ok"

    @property
    def ok(self):
        return self.status == "ok"


@dataclass
class RunConfig:
    datasets: list
    ranks: tuple = PAPER_RANKS
    repetitions: int = 10
    base_seed: int = 0
    out_dir: str = "results"
    oversampling: float = DEFAULT_OVERSAMPLING
    algorithms: tuple = ALGORITHMS
    warmup: int = 0
    skip_timing: bool = False
    workers: int = 1
    skipped: list = field(default_factory=list)

    def __post_init__(self):
        ranks = tuple(int(r) for r in self.ranks)
        if not ranks or any(b <= a for a, b in zip(ranks, ranks[1:])):
            raise ValueError(f"rank grid must be non-empty and strictly increasing: {ranks}")
        if ranks[0] < 1:
            raise ValueError("ranks must be >= 1")
        self.ranks = ranks
        unknown = set(self.algorithms) - set(ALGORITHMS)
        if unknown:
            raise ValueError(f"unknown algorithms: {sorted(unknown)}")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")


def cell_seed(base_seed, dataset, algorithm, rank, repetition):
    """Deterministic 64-bit seed for one sweep cell."""
    key = f"{base_seed}|{dataset}|{algorithm}|{rank}|{repetition}".encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "little")


def _factorize(matrix, algorithm, rank, seed, oversampling):
    if algorithm == "svd_baseline":
        return svd(matrix)
    method = "deterministic" if algorithm == "det_id" else "randomized"
    return id_auto(matrix, rank, method=method, seed=seed, oversampling_fraction=oversampling)


def run_cell(matrix, algorithm, rank, seed, oversampling=DEFAULT_OVERSAMPLING,
             dataset="", repetition=0, warmup=0, timed=True):
    """Time one factorization call and measure its error.

    Algorithm failures are captured in ``status`` instead of raised.
    """
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    try:
        for _ in range(warmup):
            _factorize(matrix, algorithm, rank, seed, oversampling)
        start = time.perf_counter()
        result = _factorize(matrix, algorithm, rank, seed, oversampling)
        elapsed = time.perf_counter() - start
        if algorithm == "svd_baseline":
            err = truncated_svd_error(matrix, rank, sigma=result.singular_values)
            max_z = None
        else:
            diag = diagnostics(matrix, result)
            err, max_z = diag.relative_error, diag.max_abs_z
        status = "ok"
    except (np.linalg.LinAlgError, ValueError) as exc:
        log.warning("cell %s/%s/k=%d/rep=%d failed: %s", dataset, algorithm, rank, repetition, exc)
        elapsed, err, max_z = math.nan, math.nan, None
        status = f"error: {type(exc).__name__}: {exc}"
    return ExperimentRecord(
        dataset=dataset, algorithm=algorithm, rank=rank, repetition=repetition, seed=seed,
        relative_error=err, wall_time_s=elapsed if timed else math.nan,
        max_abs_z=max_z, status=status)


def plan_cells(config, shapes):
    """All (dataset, algorithm, rank, repetition) cells plus the skipped ones.

    ``shapes`` maps dataset name to matrix shape.
    """
    cells, skipped = [], []
    for spec in config.datasets:
        limit = min(shapes[spec.name])
        for rank in config.ranks:
            reason = None
            if rank > limit:
                reason = f"rank {rank} exceeds min dimension {limit}"
            elif spec.rank_limit is not None and rank >= spec.rank_limit:
                reason = f"rank {rank} >= dataset rank limit {spec.rank_limit}"
            for algorithm in config.algorithms:
                reps = config.repetitions if algorithm == "rand_id" else 1
                for rep in range(reps):
                    cell = (spec.name, algorithm, rank, rep)
                    if reason:
                        skipped.append(cell + (reason,))
                    else:
                        cells.append(cell)
    return cells, skipped


def run_sweep(config, matrices=None):
    """Records for every planned cell.

    ``matrices`` may supply already-resolved matrices by dataset name.
    """
    matrices = dict(matrices or {})
    for spec in config.datasets:
        if spec.name not in matrices:
            matrices[spec.name] = resolve(spec)
    cells, skipped = plan_cells(config, {k: v.shape for k, v in matrices.items()})
    for name, algorithm, rank, rep, reason in skipped:
        if rep == 0:
            log.info("skipping %s/%s/k=%d: %s", name, algorithm, rank, reason)
    config.skipped = skipped

    # error-only mode: the baseline needs one set of singular values per dataset
    sigmas = {}
    if config.skip_timing and "svd_baseline" in config.algorithms:
        sigmas = {spec.name: singular_values(matrices[spec.name]) for spec in config.datasets}

    def run(cell):
        name, algorithm, rank, rep = cell
        matrix = matrices[name]
        seed = cell_seed(config.base_seed, name, algorithm, rank, rep)
        if algorithm == "svd_baseline" and name in sigmas:
            return ExperimentRecord(name, algorithm, rank, rep, seed,
                                    truncated_svd_error(matrix, rank, sigma=sigmas[name]), math.nan)
        return run_cell(matrix, algorithm, rank, seed, config.oversampling, dataset=name,
                        repetition=rep, warmup=config.warmup, timed=not config.skip_timing)

    if config.skip_timing and config.workers > 1:
        with ThreadPoolExecutor(config.workers) as pool:
            records = list(pool.map(run, cells))
    else:
        records = [run(cell) for cell in cells]
    return sort_records(records)


def sort_records(records):
    return sorted(records, key=lambda r: (r.dataset, r.algorithm, r.rank, r.repetition))
