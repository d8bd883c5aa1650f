"""Monte Carlo reference for the outage formulas.

Port k draws its 2m Gaussian components as mu_k times the reference port's
components plus independent noise, so given the reference envelope each
port is an independent noncentral chi variable. That is exactly the law the
exact integrand encodes, which makes the simulator a true oracle for it.

Trials are split into fixed-size chunks, each with its own stream spawned
from the master seed, so the estimate does not depend on how many worker
threads process the chunks.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from fasop.analysis import FasConfig
from fasop.correlation import CorrelationProfile
from fasop.errors import DomainError

CHUNK = 1 << 16
THREADS_ENV = "FASOP_THREADS"


@dataclass(frozen=True)
class McEstimate:
    op_hat: float
    n_samples: int
    std_err: float
    seed: int | None

    @classmethod
    def from_count(cls, outages: int, n_samples: int, seed):
        p = outages / n_samples
        return cls(p, n_samples, math.sqrt(p * (1.0 - p) / n_samples), seed)


def worker_count() -> int:
    value = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(value))
    except ValueError:
        raise DomainError(f"{THREADS_ENV} must be an integer, got {value!r}") from None


def sample_port_gains(cfg: FasConfig, prof: CorrelationProfile, rng: np.random.Generator, size: int | None = None):
    """Draw correlated Nakagami-m port gains g_k = |h_k|^2 with E[g_k] = omega_k^2.

    Returns shape (N,) for ``size=None``, else (size, N).
    """
    if prof.n_ports != cfg.n_ports:
        raise DomainError(f"profile has {prof.n_ports} ports, config has {cfg.n_ports}")
    n = 1 if size is None else int(size)
    m = cfg.m
    mu = prof.mu[1:][None, :, None]
    noise_scale = np.sqrt(1.0 - prof.mu[1:] ** 2)[None, :, None]

    ref_x = rng.standard_normal((n, 1, m))
    ref_y = rng.standard_normal((n, 1, m))
    others = cfg.n_ports - 1
    port_x = mu * ref_x + noise_scale * rng.standard_normal((n, others, m))
    port_y = mu * ref_y + noise_scale * rng.standard_normal((n, others, m))

    power = np.concatenate(
        ((ref_x**2 + ref_y**2).sum(axis=2), (port_x**2 + port_y**2).sum(axis=2)), axis=1
    )
    gains = power * (np.asarray(cfg.omega) ** 2 / (2.0 * m))[None, :]
    return gains[0] if size is None else gains


def _chunk_sizes(n_samples):
    full, rest = divmod(n_samples, CHUNK)
    return [CHUNK] * full + ([rest] if rest else [])


def _run_chunks(count_chunk, n_samples, seed):
    if n_samples < 1:
        raise DomainError(f"n_samples must be >= 1, got {n_samples}")
    sizes = _chunk_sizes(n_samples)
    streams = np.random.SeedSequence(seed).spawn(len(sizes))
    jobs = list(zip(sizes, streams))
    workers = worker_count()
    if workers == 1 or len(jobs) == 1:
        counts = [count_chunk(size, np.random.default_rng(ss)) for size, ss in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(lambda job: count_chunk(job[0], np.random.default_rng(job[1])), jobs))
    return McEstimate.from_count(int(sum(counts)), n_samples, seed)


def empirical_op(
    cfg: FasConfig,
    prof: CorrelationProfile,
    gamma_th: float,
    gamma_bar: float,
    n_samples: int,
    seed: int | None = None,
) -> McEstimate:
    """Fraction of trials in which the best port misses the threshold."""
    if not gamma_bar > 0 or gamma_th < 0:
        raise DomainError("gamma_bar must be positive and gamma_th nonnegative")
    level = gamma_th / gamma_bar

    def count(size, rng):
        best = sample_port_gains(cfg, prof, rng, size).max(axis=1)
        return int(np.count_nonzero(best < level))

    return _run_chunks(count, n_samples, seed)


def empirical_mrc_op(
    branches: int,
    m: int,
    omega: float,
    gamma_th: float,
    gamma_bar: float,
    n_samples: int,
    seed: int | None = None,
) -> McEstimate:
    """Outage of maximal ratio combining over independent Nakagami-m branches."""
    if int(branches) != branches or branches < 1:
        raise DomainError(f"branch count must be a positive integer, got {branches}")
    if int(m) != m or m < 1:
        raise DomainError(f"Nakagami m must be a positive integer, got {m}")
    level = gamma_th / gamma_bar
    scale = omega * omega / (2.0 * m)

    def count(size, rng):
        components = rng.standard_normal((size, branches, 2 * m))
        combined = scale * (components**2).sum(axis=(1, 2))
        return int(np.count_nonzero(combined < level))

    return _run_chunks(count, n_samples, seed)
