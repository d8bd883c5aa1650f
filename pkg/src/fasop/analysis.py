"""Analytical outage probability of an N-port fluid antenna system.

All SNR arguments are linear. ``gamma_th`` is the outage threshold and
``gamma_bar`` the average transmit SNR; outage is the event
``gamma_bar * max_k g_k < gamma_th`` with port gains g_k = |h_k|^2.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from fasop.correlation import CorrelationProfile
from fasop.errors import DomainError
from fasop.quadrature import QuadratureSettings, integrate
from fasop.specfun import DEFAULT_ACCURACY, Accuracy, marcum_cdf, reg_lower_gamma


class Method(str, enum.Enum):
    EXACT = "exact"
    CLOSED_FORM = "closed-form"
    APPROX = "approx"
    ASYMPTOTIC = "asymptotic"
    MRC = "mrc"
    MONTE_CARLO = "mc"


@dataclass(frozen=True)
class FasConfig:
    """Fluid antenna geometry and fading.

    ``omega`` holds the Nakagami amplitude parameter of each port; its square
    is the average channel power. Defaults to 1 on every port.
    """

    n_ports: int
    antenna_size: float
    m: int
    omega: tuple = field(default=None)

    def __post_init__(self):
        if int(self.n_ports) != self.n_ports or self.n_ports < 1:
            raise DomainError(f"n_ports must be a positive integer, got {self.n_ports}")
        if not self.antenna_size > 0:
            raise DomainError(f"antenna size must be positive, got {self.antenna_size}")
        if int(self.m) != self.m or self.m < 1:
            raise DomainError(f"Nakagami m must be a positive integer, got {self.m}")
        object.__setattr__(self, "n_ports", int(self.n_ports))
        object.__setattr__(self, "m", int(self.m))
        omega = (1.0,) * self.n_ports if self.omega is None else tuple(float(w) for w in self.omega)
        if len(omega) != self.n_ports:
            raise DomainError(f"omega has {len(omega)} entries for {self.n_ports} ports")
        if any(not w > 0 for w in omega):
            raise DomainError("every omega must be positive")
        object.__setattr__(self, "omega", omega)


@dataclass(frozen=True)
class GammaFit:
    """Gamma law whose small-argument CDF matches the exact one.

    ``log_a0`` is kept because a0 itself leaves double range for a few
    hundred ports with m > 1.
    """

    alpha: float
    beta: float
    log_a0: float

    @property
    def a0(self) -> float:
        try:
            return math.exp(self.log_a0)
        except OverflowError:
            raise OverflowError(f"a0 is not representable; log(a0) = {self.log_a0}") from None


@dataclass(frozen=True)
class OpCurve:
    gamma_bar_db: np.ndarray
    op: np.ndarray
    method: Method
    config: FasConfig | None = None

    def __post_init__(self):
        grid = np.asarray(self.gamma_bar_db, dtype=float)
        op = np.asarray(self.op, dtype=float)
        object.__setattr__(self, "gamma_bar_db", grid)
        object.__setattr__(self, "op", op)
        if grid.shape != op.shape or grid.ndim != 1:
            raise DomainError("curve abscissa and values must be 1-D and equally long")
        if np.any(np.diff(grid) <= 0):
            raise DomainError("curve abscissa must be strictly increasing")

    @property
    def exceeds_one(self) -> bool:
        return bool(np.any(self.op > 1.0))


def snr_threshold_linear(gamma_th_db: float) -> float:
    """dB to linear power ratio."""
    return 10.0 ** (gamma_th_db / 10.0)


def _check(cfg, prof, gamma_th, gamma_bar):
    if prof is not None and prof.n_ports != cfg.n_ports:
        raise DomainError(f"profile has {prof.n_ports} ports, config has {cfg.n_ports}")
    if not gamma_th > 0:
        raise DomainError(f"gamma_th must be positive, got {gamma_th}")
    if not gamma_bar > 0:
        raise DomainError(f"gamma_bar must be positive, got {gamma_bar}")


def _port_terms(cfg, prof):
    mu = prof.mu[1:]
    omega = np.asarray(cfg.omega[1:])
    return mu, omega, 1.0 - mu * mu


def exact_op(
    cfg: FasConfig,
    prof: CorrelationProfile,
    gamma_th: float,
    gamma_bar: float,
    quad: QuadratureSettings = QuadratureSettings(),
    accuracy: Accuracy = DEFAULT_ACCURACY,
) -> float:
    """Outage probability by integrating over the reference-port envelope.

    Conditioned on the reference envelope r, every other port is an
    independent noncentral chi variable, so the joint outage factorises into
    Marcum-Q CDF terms. The product is accumulated as a sum of logs; it has
    N-1 factors in (0, 1] and underflows quickly for large N.
    """
    _check(cfg, prof, gamma_th, gamma_bar)
    m = cfg.m
    om1_sq = cfg.omega[0] ** 2
    ratio = gamma_th / gamma_bar
    log_prefactor = math.log(2.0) + m * math.log(m) - math.lgamma(m) - m * math.log(om1_sq)

    mu, omega, one_minus = _port_terms(cfg, prof)
    slopes = np.sqrt(2.0 * m * mu * mu / (om1_sq * one_minus))
    thresholds = np.sqrt(2.0 * m * ratio / (omega**2 * one_minus))

    def integrand(r):
        log_f = log_prefactor + (2 * m - 1) * np.log(r) - m * r * r / om1_sq
        for slope, b in zip(slopes, thresholds):
            with np.errstate(divide="ignore"):
                log_f = log_f + np.log(marcum_cdf(m, slope * r, b, accuracy))
        return np.exp(log_f)

    value, _ = integrate(integrand, 0.0, math.sqrt(ratio), quad)
    return min(max(value, 0.0), 1.0)


def closed_form_op(cfg: FasConfig, prof: CorrelationProfile, gamma_th: float, gamma_bar: float) -> float:
    """Closed form after replacing each Marcum CDF by its small-threshold limit.

    Tight only while gamma_th / gamma_bar is small; it is not clipped to
    [0, 1] because it is a diagnostic of the approximation chain.
    """
    _check(cfg, prof, gamma_th, gamma_bar)
    m = cfg.m
    om1_sq = cfg.omega[0] ** 2
    ratio = gamma_th / gamma_bar
    mu, omega, one_minus = _port_terms(cfg, prof)
    spread = 1.0 + math.fsum(mu * mu / one_minus)
    arg = m * ratio * spread / om1_sq
    lower = reg_lower_gamma(m, arg)
    if lower == 0.0:
        return 0.0
    log_op = (
        math.log(lower)
        - m * math.log(spread)
        + m * math.fsum(np.log(m * ratio / (omega**2 * one_minus)))
        - (cfg.n_ports - 1) * math.lgamma(m + 1.0)
    )
    return math.exp(log_op)


def log_a0_coefficient(cfg: FasConfig, prof: CorrelationProfile) -> float:
    """log of a0 in F(x) ~ a0 x^(mN), the small-x behaviour of the selected gain CDF."""
    _check(cfg, prof, 1.0, 1.0)
    m = cfg.m
    mu, omega, one_minus = _port_terms(cfg, prof)
    ports = np.log(m) - 2.0 * np.log(omega) - np.log1p(-mu * mu)
    return math.fsum(
        [
            (m - 1) * math.log(m),
            -math.lgamma(m),
            -2.0 * m * math.log(cfg.omega[0]),
            -(cfg.n_ports - 1) * math.lgamma(m + 1.0),
            m * math.fsum(ports),
        ]
    )


def a0_coefficient(cfg: FasConfig, prof: CorrelationProfile) -> float:
    log_a0 = log_a0_coefficient(cfg, prof)
    try:
        return math.exp(log_a0)
    except OverflowError:
        raise OverflowError(f"a0 is not representable; log(a0) = {log_a0}") from None


def gamma_fit(cfg: FasConfig, prof: CorrelationProfile) -> GammaFit:
    """Shape and scale by matching the leading small-x term of the CDF.

    alpha = mN; beta solves 1 / (beta^alpha alpha Gamma(alpha)) = a0.
    """
    log_a0 = log_a0_coefficient(cfg, prof)
    alpha = float(cfg.m * cfg.n_ports)
    beta = math.exp(-(math.lgamma(alpha) + log_a0 + math.log(alpha)) / alpha)
    return GammaFit(alpha, beta, log_a0)


def approx_op(fit: GammaFit, gamma_th: float, gamma_bar: float) -> float:
    """P(alpha, gamma_th / (beta gamma_bar))."""
    if not (gamma_th > 0 and gamma_bar > 0):
        raise DomainError("SNR arguments must be positive")
    return reg_lower_gamma(fit.alpha, gamma_th / (fit.beta * gamma_bar))


def asymptotic_op(fit: GammaFit, gamma_th: float, gamma_bar: float) -> float:
    """High-SNR outage (x^alpha)/(alpha Gamma(alpha)), x = gamma_th/(beta gamma_bar).

    Not clipped: it exceeds 1 at low SNR, and slope fits need the raw value.
    """
    if not (gamma_th > 0 and gamma_bar > 0):
        raise DomainError("SNR arguments must be positive")
    a = fit.alpha
    log_op = a * math.log(gamma_th / (fit.beta * gamma_bar)) - math.log(a) - math.lgamma(a)
    try:
        return math.exp(log_op)
    except OverflowError:
        return math.inf


def mrc_op(branches: int, m: int, omega: float, gamma_th: float, gamma_bar: float) -> float:
    """L-branch maximal ratio combining over i.i.d. Nakagami-m branches.

    The combined gain is Gamma(Lm, omega^2/m).
    """
    if int(branches) != branches or branches < 1:
        raise DomainError(f"branch count must be a positive integer, got {branches}")
    if not m > 0 or not omega > 0:
        raise DomainError("m and omega must be positive")
    if not (gamma_th > 0 and gamma_bar > 0):
        raise DomainError("SNR arguments must be positive")
    return reg_lower_gamma(branches * m, m * gamma_th / (omega * omega * gamma_bar))
