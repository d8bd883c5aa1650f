import math

import numpy as np
import pytest

from fasop.errors import ConvergenceError, DomainError
from fasop.quadrature import GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES, QuadratureSettings, integrate


def test_gauss_nodes_match_legendre():
    x, w = np.polynomial.legendre.leggauss(10)
    gauss_nodes = NODES[GAUSS_WEIGHTS > 0]
    assert np.allclose(gauss_nodes, x, atol=1e-15)
    assert np.allclose(GAUSS_WEIGHTS[GAUSS_WEIGHTS > 0], w, atol=1e-15)


@pytest.mark.parametrize("degree", range(0, 32))
def test_kronrod_exact_to_degree_31(degree):
    exact = (1.0 - (-1.0) ** (degree + 1)) / (degree + 1)
    assert float(np.dot(KRONROD_WEIGHTS, NODES**degree)) == pytest.approx(exact, abs=1e-14)


def test_smooth_integrand():
    value, err = integrate(np.exp, 0.0, 1.0)
    assert value == pytest.approx(math.e - 1.0, rel=1e-14)
    assert err >= 0


def test_adapts_to_peak():
    value, _ = integrate(lambda x: 1.0 / (1e-4 + x * x), -1.0, 1.0, QuadratureSettings(rel_tol=1e-12))
    assert value == pytest.approx(2.0 / 1e-2 * math.atan(1.0 / 1e-2), rel=1e-11)


def test_empty_interval():
    assert integrate(np.exp, 2.0, 2.0) == (0.0, 0.0)


def test_budget_exhaustion():
    with pytest.raises(ConvergenceError):
        integrate(lambda x: np.sign(x - 0.3337), 0.0, 1.0, QuadratureSettings(rel_tol=1e-15, abs_tol=0.0, max_subdivisions=3))


def test_settings_validation():
    with pytest.raises(DomainError):
        QuadratureSettings(rel_tol=0.0)
    with pytest.raises(DomainError):
        QuadratureSettings(max_subdivisions=0)
