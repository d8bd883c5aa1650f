"""Special functions needed by the outage formulas.

Everything here is double precision and pure. The Marcum routines are
vectorised over the first argument ``a`` because the exact outage integrand
evaluates them on a whole panel of quadrature nodes at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from fasop.errors import ConvergenceError, DomainError

_EPS = np.finfo(float).eps
_TINY = 1e-300
# exp(-_WINDOW**2 / 2) is below the smallest positive double
_WINDOW = 38.6


@dataclass(frozen=True)
class Accuracy:
    abs_tol: float = 1e-12
    max_terms: int = 10000

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise DomainError(f"abs_tol must be positive, got {self.abs_tol}")
        if self.max_terms < 1:
            raise DomainError(f"max_terms must be >= 1, got {self.max_terms}")


DEFAULT_ACCURACY = Accuracy()


def ln_gamma(x: float) -> float:
    """Natural log of the Gamma function for x > 0."""
    if not x > 0:
        raise DomainError(f"ln_gamma requires x > 0, got {x}")
    return math.lgamma(x)


# --- incomplete gamma ------------------------------------------------------


def _log_kernel(a, x):
    # log(x^a e^-x / Gamma(a))
    return a * math.log(x) - x - math.lgamma(a)


def _lower_series(a, x, accuracy):
    ap = a
    term = 1.0 / a
    total = term
    for _ in range(accuracy.max_terms):
        ap += 1.0
        term *= x / ap
        total += term
        if term < total * _EPS:
            return total * math.exp(_log_kernel(a, x))
    raise ConvergenceError(f"incomplete gamma series did not converge (a={a}, x={x})")


def _upper_contfrac(a, x, accuracy):
    # modified Lentz on the Legendre continued fraction for Q(a, x)
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b if b != 0.0 else 1.0 / _TINY
    h = d
    for i in range(1, accuracy.max_terms + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return math.exp(_log_kernel(a, x)) * h
    raise ConvergenceError(f"incomplete gamma continued fraction did not converge (a={a}, x={x})")


def _check_gamma_args(a, x):
    if not a > 0:
        raise DomainError(f"shape a must be positive, got {a}")
    if not x >= 0:
        raise DomainError(f"x must be nonnegative, got {x}")


def reg_lower_gamma(a: float, x: float, accuracy: Accuracy = DEFAULT_ACCURACY) -> float:
    """Regularized lower incomplete gamma P(a, x) = Υ(a, x) / Γ(a).

    The series is used below ``x = a + 1`` and the continued fraction for the
    complement above it, so whichever of P and Q is small is computed
    directly and keeps full relative precision.
    """
    _check_gamma_args(a, x)
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if x < a + 1.0:
        return min(_lower_series(a, x, accuracy), 1.0)
    return max(1.0 - _upper_contfrac(a, x, accuracy), 0.0)


def reg_upper_gamma(a: float, x: float, accuracy: Accuracy = DEFAULT_ACCURACY) -> float:
    """Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x)."""
    _check_gamma_args(a, x)
    if x == 0.0:
        return 1.0
    if math.isinf(x):
        return 0.0
    if x < a + 1.0:
        return max(1.0 - _lower_series(a, x, accuracy), 0.0)
    return min(_upper_contfrac(a, x, accuracy), 1.0)


def gamma_ladder(order: float, y: float, n: int, start: int = 0, accuracy: Accuracy = DEFAULT_ACCURACY):
    """P(order + k, y) and Q(order + k, y) for k = start .. start+n-1.

    With d(s) = y^s e^-y / Gamma(s + 1), P(s, y) = sum_{j>=0} d(s + j) and
    Q(s + 1, y) = Q(s, y) + d(s). P is therefore a reverse cumulative sum
    anchored at the top index and Q a forward one anchored at the bottom;
    each is used where it is the smaller of the pair, so both keep full
    relative accuracy.
    """
    lower = np.zeros(n)
    upper = np.ones(n)
    if y == 0.0 or n == 0:
        return lower, upper
    shapes = order + start + np.arange(n, dtype=float)
    d = np.exp(shapes * math.log(y) - y - gammaln(shapes + 1.0))

    above_top = reg_lower_gamma(shapes[-1] + 1.0, y, accuracy)
    from_top = above_top + np.cumsum(d[::-1])[::-1]
    below = reg_upper_gamma(shapes[0], y, accuracy)
    from_bottom = below + np.concatenate(([0.0], np.cumsum(d[:-1])))

    series_side = shapes + 1.0 > y
    lower = np.where(series_side, from_top, 1.0 - from_bottom)
    upper = np.where(series_side, 1.0 - from_top, from_bottom)
    return np.clip(lower, 0.0, 1.0), np.clip(upper, 0.0, 1.0)


# --- Marcum Q ----------------------------------------------------------------


def _check_marcum_args(order, a, b):
    if not order > 0:
        raise DomainError(f"Marcum order must be positive, got {order}")
    if np.any(np.asarray(a) < 0) or np.any(np.isnan(a)):
        raise DomainError("Marcum argument a must be nonnegative")
    if not b >= 0:
        raise DomainError(f"Marcum argument b must be nonnegative, got {b}")


def _right_spread(mean):
    # Poisson right tails are heavier than Gaussian; the c^2/2 offset keeps the
    # Bernstein bound exp(-t^2 / (2 (mean + t/3))) below the double range
    return _WINDOW * np.sqrt(mean) + 0.5 * _WINDOW**2


def _poisson_mixture(order, x, y, accuracy, which):
    """sum_k Poisson(k; x) * ladder[k] with ladder the lower (CDF) or upper
    (Q) incomplete-gamma sequence in the shape order + k.

    Each element sums over a window of the Poisson index around x, cut so
    that every dropped term is either below the smallest double or below
    1e-40 of a retained term; abs_tol is therefore met for any
    representable result. For the CDF the window also stops where
    P(order + k, y) = Pr[Poisson(y) >= order + k] drops out of range.
    """
    x = np.asarray(x, dtype=float)
    lo = np.maximum(np.floor(x - _WINDOW * np.sqrt(x)), 0.0).astype(np.int64)
    y_hi = int(math.ceil(y + _right_spread(y)))
    if which == "lower":
        # P(order + k, y) falls with k, so past the Poisson mode the dropped
        # terms are bounded relative to the mode term
        hi = np.minimum(np.ceil(x + _WINDOW * np.sqrt(x) + _WINDOW).astype(np.int64), y_hi)
        hi = np.maximum(hi, lo)
    else:
        # Q(order + k, y) climbs to 1 near k = y, so the window must reach past y
        hi = np.maximum(np.ceil(x + _right_spread(x)).astype(np.int64), y_hi)
    width = int((hi - lo).max()) + 1
    if width > accuracy.max_terms:
        raise ConvergenceError(
            f"Marcum series needs {width} terms, above max_terms={accuracy.max_terms} (order={order}, y={y})"
        )
    base = int(lo.min())
    span = int(hi.max()) - base + 1
    lower, upper = gamma_ladder(order, y, span, base, accuracy)
    ladder = lower if which == "lower" else upper
    log_k_factorial = gammaln(np.arange(base, base + span, dtype=float) + 1.0)

    k = lo[:, None] + np.arange(width)[None, :]
    inside = k <= hi[:, None]
    k = np.minimum(k, hi[:, None])
    idx = k - base
    with np.errstate(divide="ignore", invalid="ignore"):
        log_pois = np.where(k == 0, 0.0, k * np.log(x)[:, None]) - x[:, None] - log_k_factorial[idx]
        terms = np.where(inside, np.exp(log_pois) * ladder[idx], 0.0)
    return terms.sum(axis=1)


def marcum_cdf(order: float, a, b: float, accuracy: Accuracy = DEFAULT_ACCURACY):
    """1 - Q_order(a, b), the CDF of the noncentral chi envelope.

    Summed directly rather than formed as a complement, so values far below
    machine epsilon keep their relative accuracy. ``a`` may be an array.
    """
    _check_marcum_args(order, a, b)
    scalar = np.ndim(a) == 0
    if b == 0.0:
        out = np.zeros(np.shape(a))
        return float(out) if scalar else out
    x = 0.5 * np.asarray(a, dtype=float) ** 2
    y = 0.5 * b * b
    out = _poisson_mixture(order, np.atleast_1d(x), y, accuracy, "lower")
    out = np.clip(out, 0.0, 1.0)
    return float(out[0]) if scalar else out.reshape(np.shape(a))


def marcum_q(order: float, a, b: float, accuracy: Accuracy = DEFAULT_ACCURACY):
    """Generalized Marcum Q-function Q_order(a, b).

    Evaluated as the Poisson mixture of regularized upper incomplete gamma
    functions, sum_k e^{-a^2/2} (a^2/2)^k / k! * Q(order + k, b^2/2). When the
    CDF side is the smaller one it is summed instead and complemented.
    """
    _check_marcum_args(order, a, b)
    scalar = np.ndim(a) == 0
    a_arr = np.atleast_1d(np.asarray(a, dtype=float))
    if b == 0.0:
        out = np.ones(a_arr.shape)
    else:
        x = 0.5 * a_arr**2
        y = 0.5 * b * b
        # the noncentral chi-square/2 has mean order + x; below it the CDF is the small side
        small_cdf = y < order + x
        out = np.empty(a_arr.shape)
        if small_cdf.any():
            out[small_cdf] = 1.0 - _poisson_mixture(order, x[small_cdf], y, accuracy, "lower")
        if (~small_cdf).any():
            out[~small_cdf] = _poisson_mixture(order, x[~small_cdf], y, accuracy, "upper")
        out = np.clip(out, 0.0, 1.0)
    return float(out[0]) if scalar else out.reshape(np.shape(a))


# --- Bessel J0 -----------------------------------------------------------------

_SERIES_LIMIT = 8.0
_HANKEL_LIMIT = 30.0


def _j0_series(x):
    q = -0.25 * x * x
    term = 1.0
    total = 1.0
    k = 0
    while abs(term) > _EPS * 1e-3:
        k += 1
        term *= q / (k * k)
        total += term
    return total


def _j0_miller(x):
    # backward recurrence normalised by J0 + 2 sum J_2k = 1
    start = 2 * int(x / 2 + 25)
    f_next = 0.0
    f = 1e-30
    even_sum = 0.0
    for k in range(start, 0, -1):
        f_prev = (2.0 * k / x) * f - f_next
        f_next, f = f, f_prev
        if (k - 1) % 2 == 0 and k - 1 > 0:
            even_sum += f
        if abs(f) > 1e250:
            f *= 1e-250
            f_next *= 1e-250
            even_sum *= 1e-250
    return f / (f + 2.0 * even_sum)


def _j0_hankel(x):
    # P and Q of the Hankel expansion, truncated at the smallest term
    inv8x = 1.0 / (8.0 * x)
    p = 1.0
    q = 0.0
    term = 1.0
    k = 0
    prev = math.inf
    while True:
        k += 1
        term *= (2 * k - 1) ** 2 * inv8x / k
        if abs(term) >= prev or abs(term) < 1e-17:
            break
        prev = abs(term)
        if k % 2:
            q += -term if (k // 2) % 2 == 0 else term
        else:
            p += -term if (k // 2) % 2 else term
    c, s = math.cos(x), math.sin(x)
    # cos(x - pi/4) and sin(x - pi/4) without subtracting pi/4 in floating point
    cos_chi = (c + s) / math.sqrt(2.0)
    sin_chi = (s - c) / math.sqrt(2.0)
    return math.sqrt(2.0 / (math.pi * x)) * (p * cos_chi - q * sin_chi)


def _bessel_j0_scalar(x):
    if not math.isfinite(x):
        raise DomainError(f"bessel_j0 requires a finite argument, got {x}")
    x = abs(x)
    if x <= _SERIES_LIMIT:
        return _j0_series(x)
    if x <= _HANKEL_LIMIT:
        return _j0_miller(x)
    return _j0_hankel(x)


def bessel_j0(x):
    """Bessel function of the first kind, order zero.

    Power series up to |x| = 8, Miller backward recurrence up to 30, Hankel
    asymptotic expansion beyond. Accepts scalars or arrays.
    """
    if np.ndim(x) == 0:
        return _bessel_j0_scalar(float(x))
    arr = np.asarray(x, dtype=float)
    return np.array([_bessel_j0_scalar(v) for v in arr.ravel()]).reshape(arr.shape)
