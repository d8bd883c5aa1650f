"""Port correlation profiles for an N-port fluid antenna of size W wavelengths."""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass

import numpy as np

from fasop.errors import DomainError
from fasop.specfun import bessel_j0

# keeps 1 - mu^2 away from zero for degenerate geometries (tiny W)
MU_CEILING = 1.0 - 1e-9


class CorrelationModel(str, enum.Enum):
    UNIFORM = "uniform"
    REFERENCE = "reference"
    NONE = "none"


@dataclass(frozen=True)
class CorrelationProfile:
    """Correlation coefficients of every port against the reference port.

    ``mu[0]`` is the reference port itself and is fixed at 1; only
    ``mu[1:]`` enters the outage formulas.
    """

    mu: np.ndarray
    model: CorrelationModel
    clamped: bool = False

    def __post_init__(self):
        mu = np.asarray(self.mu, dtype=float)
        object.__setattr__(self, "mu", mu)
        if mu.ndim != 1 or mu.size < 1:
            raise DomainError("mu must be a nonempty vector")
        rest = mu[1:]
        if np.any(rest < 0) or np.any(rest >= 1):
            raise DomainError("port correlation coefficients must lie in [0, 1)")

    @property
    def n_ports(self) -> int:
        return self.mu.size


def _check_geometry(n_ports, size):
    if int(n_ports) != n_ports or n_ports < 2:
        raise DomainError(f"need at least 2 ports, got {n_ports}")
    if not size > 0:
        raise DomainError(f"antenna size W must be positive, got {size}")


def _clamp(mu):
    clamped = bool(np.any(mu > MU_CEILING))
    if clamped:
        warnings.warn("correlation coefficient clamped below 1; geometry is degenerate", RuntimeWarning, stacklevel=3)
    return np.minimum(mu, MU_CEILING), clamped


def mu_uniform(n_ports: int, size: float) -> CorrelationProfile:
    """Single coefficient shared by every port pair (no reference port).

    mu^2 = | 2/(N(N-1)) sum_{k=1}^{N-1} (N-k) J0(2 pi k W / (N-1)) |
    """
    _check_geometry(n_ports, size)
    n = int(n_ports)
    k = np.arange(1, n)
    weights = (n - k).astype(float)
    j0 = bessel_j0(2.0 * np.pi * k * size / (n - 1))
    mu = np.sqrt(abs(2.0 / (n * (n - 1)) * float(np.dot(weights, j0))))
    values, clamped = _clamp(np.full(n - 1, mu))
    return CorrelationProfile(np.concatenate(([1.0], values)), CorrelationModel.UNIFORM, clamped)


def mu_reference(n_ports: int, size: float) -> CorrelationProfile:
    """Jakes correlation of port k against port 1, mu_k = |J0(2 pi (k-1) W / (N-1))|."""
    _check_geometry(n_ports, size)
    n = int(n_ports)
    spacing = 2.0 * np.pi * size / (n - 1)
    mu = np.abs(bessel_j0(spacing * np.arange(1, n)))
    values, clamped = _clamp(mu)
    return CorrelationProfile(np.concatenate(([1.0], values)), CorrelationModel.REFERENCE, clamped)


def single_port() -> CorrelationProfile:
    return CorrelationProfile(np.ones(1), CorrelationModel.NONE)


def build_profile(model: CorrelationModel | str, n_ports: int, size: float) -> CorrelationProfile:
    """Dispatch on model name; a single port gets the trivial profile."""
    model = CorrelationModel(model)
    if n_ports == 1:
        return single_port()
    if model is CorrelationModel.UNIFORM:
        return mu_uniform(n_ports, size)
    if model is CorrelationModel.REFERENCE:
        return mu_reference(n_ports, size)
    raise DomainError(f"model {model.value!r} needs exactly one port")
