import math

import numpy as np
import pytest
from scipy import integrate as sp_integrate

from kantorovich.errors import InvalidParameter, MissingDerivatives
from kantorovich.signals import CATALOG, affine, constant, polynomial, signal_from_name

XS = np.linspace(-2, 2, 41)


@pytest.mark.parametrize("name", CATALOG)
def test_derivatives_match_finite_differences(name):
    s = signal_from_name(name)
    h = 1e-5
    for j in range(1, 4):
        fd = (s.derivative(j - 1)(XS + h) - s.derivative(j - 1)(XS - h)) / (2 * h)
        scale = max(1.0, float(np.max(np.abs(s.derivative(j)(XS)))))
        assert np.max(np.abs(fd - s.derivative(j)(XS))) <= 1e-5 * scale


@pytest.mark.parametrize("name", CATALOG)
def test_antiderivative_matches_quad(name):
    s = signal_from_name(name)
    for a, b in [(-1.0, 0.5), (0.2, 1.7)]:
        ref, _ = sp_integrate.quad(s.f, a, b, epsabs=1e-13)
        assert s.antiderivative(b) - s.antiderivative(a) == pytest.approx(ref, abs=1e-12)


@pytest.mark.parametrize("name", ["sin", "cos", "gaussian", "runge"])
def test_sup_bounds_dominate(name):
    s = signal_from_name(name)
    grid = np.linspace(-20, 20, 400001)
    for j in range(5):
        observed = float(np.max(np.abs(s.derivative(j)(grid))))
        assert observed <= s.sup_bound(j) * (1 + 1e-9)


def test_runge_even_bounds_are_attained():
    s = signal_from_name("runge")
    assert abs(s.derivative(2)(0.0)) == pytest.approx(s.sup_bound(2))


def test_polynomial_signal():
    p = polynomial([1, 2, 3])
    assert p(2.0) == 17.0
    assert p.derivative(1)(2.0) == 14.0
    assert p.derivative(2)(5.0) == 6.0
    assert p.sup_bound(0) is None and p.sup_bound(1) is None
    assert p.sup_bound(2) == 6.0 and p.sup_bound(3) == 0.0
    assert affine().name == "affine" and affine()(1.0) == 3.0


def test_constant():
    c = constant(7)
    assert np.all(c(XS) == 7.0)
    assert c.sup_bound(3) == 0.0


def test_derivative_signal():
    s = signal_from_name("sin").derivative_signal(1)
    assert s(0.3) == pytest.approx(math.cos(0.3))
    assert s.antiderivative(0.3) == pytest.approx(math.sin(0.3))
    assert s.derivative(1)(0.3) == pytest.approx(-math.sin(0.3))


def test_missing_derivative():
    s = signal_from_name("sin")
    with pytest.raises(MissingDerivatives):
        s.derivative(20)


def test_translate():
    s = signal_from_name("gaussian").translate(0.7)
    assert s(0.7) == 1.0
    assert s.derivative(1)(0.8) == pytest.approx(signal_from_name("gaussian").derivative(1)(0.1))
    assert s.antiderivative(1.7) - s.antiderivative(0.7) == pytest.approx(
        0.5 * math.sqrt(math.pi) * math.erf(1.0))


def test_scaled_sum():
    h = signal_from_name("sin").scaled_sum(2.0, signal_from_name("cos"), -3.0)
    assert h(0.4) == pytest.approx(2 * math.sin(0.4) - 3 * math.cos(0.4))
    assert h.antiderivative(0.4) == pytest.approx(-2 * math.cos(0.4) - 3 * math.sin(0.4))


def test_unknown_signal():
    with pytest.raises(InvalidParameter):
        signal_from_name("square")
