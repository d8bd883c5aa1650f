"""Goodness of fit and cost comparison between outage methods."""

from __future__ import annotations

import hashlib
import statistics
import time
import tracemalloc
from dataclasses import asdict, dataclass, field

import numpy as np

from fasop.analysis import FasConfig, Method, OpCurve, approx_op, asymptotic_op, exact_op, gamma_fit
from fasop.correlation import CorrelationProfile
from fasop.errors import DomainError, GridMismatchError
from fasop.quadrature import QuadratureSettings

BENCHMARKED = (Method.EXACT, Method.APPROX, Method.ASYMPTOTIC)


def nmse(reference: OpCurve, candidate: OpCurve) -> float:
    """1 - ||P - P_hat||^2 / ||P - mean(P)||^2; 1 is a perfect fit, unbounded below."""
    if reference.gamma_bar_db.shape != candidate.gamma_bar_db.shape or not np.array_equal(
        reference.gamma_bar_db, candidate.gamma_bar_db
    ):
        raise GridMismatchError("curves must share the same SNR grid")
    return nmse_values(reference.op, candidate.op)


def nmse_values(reference, candidate) -> float:
    reference = np.asarray(reference, dtype=float)
    candidate = np.asarray(candidate, dtype=float)
    spread = float(np.sum((reference - reference.mean()) ** 2))
    if spread == 0.0:
        raise DomainError("reference curve is constant; NMSE is undefined")
    return 1.0 - float(np.sum((reference - candidate) ** 2)) / spread


@dataclass
class BenchmarkRecord:
    label: str
    wall_time_seconds: dict
    time_reduction_percent: float
    nmse: float
    peak_alloc_bytes: dict = field(default_factory=dict)
    grid_checksum: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def grid_checksum(grid) -> str:
    return hashlib.sha256(np.ascontiguousarray(grid, dtype=float).tobytes()).hexdigest()[:16]


def _curve_runner(method, cfg, prof, quad):
    # each runner owns its full per-curve setup so timings include it
    def run(grid):
        if method is Method.EXACT:
            values = [exact_op(cfg, prof, th, bar, quad) for th, bar in grid]
        else:
            fit = gamma_fit(cfg, prof)
            func = approx_op if method is Method.APPROX else asymptotic_op
            values = [func(fit, th, bar) for th, bar in grid]
        return np.array(values), grid_checksum(grid)

    return run


def benchmark_methods(
    cfg: FasConfig,
    prof: CorrelationProfile,
    grid,
    repetitions: int = 3,
    label: str = "",
    measure_memory: bool = False,
    quad: QuadratureSettings = QuadratureSettings(),
) -> BenchmarkRecord:
    """Median wall time of exact, Gamma-approximate and asymptotic OP on one grid.

    ``grid`` is a sequence of linear (gamma_th, gamma_bar) pairs.
    """
    if repetitions < 3:
        raise DomainError(f"need at least 3 repetitions, got {repetitions}")
    grid = np.asarray(grid, dtype=float).reshape(-1, 2)
    times, values, checksums, peaks = {}, {}, {}, {}
    for method in BENCHMARKED:
        run = _curve_runner(method, cfg, prof, quad)
        samples = []
        for _ in range(repetitions):
            start = time.perf_counter()
            values[method], checksums[method] = run(grid)
            samples.append(time.perf_counter() - start)
        times[method.value] = statistics.median(samples)
        if measure_memory:
            tracemalloc.start()
            run(grid)
            peaks[method.value] = tracemalloc.get_traced_memory()[1]
            tracemalloc.stop()
    if len(set(checksums.values())) != 1:
        raise GridMismatchError("methods were timed on different grids")
    reduction = 100.0 * (1.0 - times[Method.APPROX.value] / times[Method.EXACT.value])
    return BenchmarkRecord(
        label=label or f"N={cfg.n_ports}",
        wall_time_seconds=times,
        time_reduction_percent=reduction,
        nmse=nmse_values(values[Method.EXACT], values[Method.APPROX]),
        peak_alloc_bytes=peaks,
        grid_checksum=checksums[Method.EXACT],
    )
