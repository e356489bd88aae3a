import math

import numpy as np
import pytest
from scipy import integrate as sp_integrate

from kantorovich import quadrature
from kantorovich.errors import QuadratureNonconvergence


def test_gauss_legendre_weights_sum_to_two():
    nodes, weights = quadrature.gauss_legendre(16)
    assert math.isclose(weights.sum(), 2.0, rel_tol=0, abs_tol=1e-14)
    assert np.all(np.abs(nodes) < 1)


def test_fixed_rule_exact_for_degree_31():
    # a 16-point rule integrates degree 2*16-1 exactly
    f = lambda x: x**31 + 3 * x**30
    got = quadrature.fixed_rule(f, np.array([0.0]), np.array([1.0]), 16)[0]
    assert got == pytest.approx(1 / 32 + 3 / 31, abs=1e-14)


@pytest.mark.parametrize(
    "f, a, b",
    [
        (np.sin, 0.0, 10.0),
        (lambda x: np.exp(-(x**2)), -5.0, 5.0),
        (lambda x: np.abs(x) ** 1.5, -1.0, 2.0),
        (lambda x: 1 / (1 + 25 * x**2), -1.0, 1.0),
    ],
)
def test_integrate_matches_scipy(f, a, b):
    ref, _ = sp_integrate.quad(f, a, b, epsabs=1e-13, limit=200)
    value, err = quadrature.integrate(f, a, b, tol=1e-10)
    assert abs(value - ref) <= 1e-10
    assert err <= 1e-10


def test_integrate_breakpoints_for_kinks():
    f = lambda x: np.abs(x - 0.3)
    value, _ = quadrature.integrate(f, 0.0, 1.0, tol=1e-12, breakpoints=(0.3,))
    assert value == pytest.approx(0.3**2 / 2 + 0.7**2 / 2, abs=1e-14)


def test_integrate_complex():
    value, _ = quadrature.integrate(lambda x: np.exp(1j * x), 0.0, np.pi, tol=1e-12)
    assert abs(value - 2j) <= 1e-12


def test_integrate_nonconvergence():
    # 1/x on (0, 1] diverges; adaptive refinement can never meet the tolerance
    with pytest.raises(QuadratureNonconvergence):
        quadrature.integrate(lambda x: 1 / x, 0.0, 1.0, tol=1e-12, max_levels=8)
