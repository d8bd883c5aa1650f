"""Evaluate any outage method over a grid of average SNRs."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from fasop.analysis import (
    FasConfig,
    Method,
    OpCurve,
    approx_op,
    asymptotic_op,
    closed_form_op,
    exact_op,
    gamma_fit,
    mrc_op,
    snr_threshold_linear,
)
from fasop.correlation import CorrelationProfile
from fasop.montecarlo import empirical_op, worker_count
from fasop.quadrature import QuadratureSettings


def db_grid(start: float, stop: float, step: float) -> np.ndarray:
    """Inclusive grid start, start+step, ..., stop (stop kept if it lands on the grid)."""
    if step <= 0:
        raise ValueError(f"grid step must be positive, got {step}")
    if stop < start:
        raise ValueError(f"grid stop {stop} is below start {start}")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(count)


def point_evaluator(
    method: Method,
    cfg: FasConfig,
    prof: CorrelationProfile,
    *,
    branches: int = 2,
    samples: int = 100_000,
    seed: int | None = 0,
    quad: QuadratureSettings = QuadratureSettings(),
):
    """Return f(gamma_th, gamma_bar) -> OP for one method, with setup done once."""
    method = Method(method)
    if method is Method.EXACT:
        return lambda th, bar: exact_op(cfg, prof, th, bar, quad)
    if method is Method.CLOSED_FORM:
        return lambda th, bar: closed_form_op(cfg, prof, th, bar)
    if method in (Method.APPROX, Method.ASYMPTOTIC):
        fit = gamma_fit(cfg, prof)
        func = approx_op if method is Method.APPROX else asymptotic_op
        return lambda th, bar: func(fit, th, bar)
    if method is Method.MRC:
        return lambda th, bar: mrc_op(branches, cfg.m, cfg.omega[0], th, bar)
    return lambda th, bar: empirical_op(cfg, prof, th, bar, samples, seed).op_hat


def map_ordered(func, items):
    """Map over items, threaded when FASOP_THREADS > 1; results keep input order."""
    workers = worker_count()
    if workers == 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def op_curve(
    method: Method,
    cfg: FasConfig,
    prof: CorrelationProfile,
    gamma_th_db: float,
    gamma_bar_db,
    **options,
) -> OpCurve:
    """OP against average SNR (both in dB on the way in, linear inside)."""
    grid = np.asarray(gamma_bar_db, dtype=float)
    evaluate = point_evaluator(method, cfg, prof, **options)
    threshold = snr_threshold_linear(gamma_th_db)
    values = map_ordered(lambda g: evaluate(threshold, snr_threshold_linear(g)), grid)
    return OpCurve(grid, np.array(values), Method(method), cfg)
