"""Signals: functions with optional derivatives and antiderivative.

All callables are vectorized (numpy in, numpy out).  ``sup_bounds[j]`` is an
upper bound for ``sup |f^(j)|`` over the real line; for the built-in
catalog these are the exact sup norms except where noted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import Polynomial
from scipy.special import erf, eval_hermite

from .errors import InvalidParameter, MissingDerivatives

Func = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Signal:
    name: str
    f: Func
    derivatives: tuple[Func, ...] = ()
    antiderivative: Func | None = None
    sup_bounds: tuple[float | None, ...] = field(default=())

    def __call__(self, x):
        return self.f(x)

    def derivative(self, j: int) -> Func:
        """``f^(j)``; ``j = 0`` is ``f`` itself."""
        if j == 0:
            return self.f
        if j > len(self.derivatives):
            raise MissingDerivatives(
                f"signal {self.name!r} carries {len(self.derivatives)} derivatives, need {j}"
            )
        return self.derivatives[j - 1]

    def derivative_signal(self, j: int) -> "Signal":
        """``f^(j)`` packaged as a signal (antiderivative ``f^(j-1)``)."""
        if j == 0:
            return self
        return Signal(
            name=f"{self.name}^({j})",
            f=self.derivative(j),
            derivatives=self.derivatives[j:],
            antiderivative=self.derivative(j - 1),
            sup_bounds=self.sup_bounds[j:],
        )

    def sup_bound(self, j: int = 0) -> float | None:
        return self.sup_bounds[j] if j < len(self.sup_bounds) else None

    def translate(self, y: float) -> "Signal":
        """``g_y(x) = f(x - y)``."""
        def shifted(fn):
            return None if fn is None else (lambda x: fn(np.asarray(x, dtype=float) - y))

        return replace(
            self,
            name=f"{self.name}(.-{y:g})",
            f=shifted(self.f),
            derivatives=tuple(shifted(d) for d in self.derivatives),
            antiderivative=shifted(self.antiderivative),
        )

    def scaled_sum(self, alpha: float, other: "Signal", beta: float) -> "Signal":
        """``alpha f + beta g`` (derivatives kept up to the shorter list)."""
        def comb(a, b):
            return None if a is None or b is None else (lambda x: alpha * a(x) + beta * b(x))

        n = min(len(self.derivatives), len(other.derivatives))
        return Signal(
            name=f"{alpha:g}*{self.name}+{beta:g}*{other.name}",
            f=comb(self.f, other.f),
            derivatives=tuple(comb(a, b) for a, b in zip(self.derivatives[:n], other.derivatives[:n])),
            antiderivative=comb(self.antiderivative, other.antiderivative),
        )


def _const(c: float) -> Signal:
    zero = lambda x: np.zeros_like(np.asarray(x, dtype=float))  # noqa: E731
    return Signal(
        name="const" if c == 1 else f"const{c:g}",
        f=lambda x: np.full_like(np.asarray(x, dtype=float), c),
        derivatives=(zero,) * 8,
        antiderivative=lambda x: c * np.asarray(x, dtype=float),
        sup_bounds=(abs(c),) + (0.0,) * 8,
    )


def polynomial(coeffs: Sequence[float], name: str | None = None) -> Signal:
    """Polynomial with ascending ``coeffs``; derivatives are exact.

    ``sup_bounds[j]`` is None for the unbounded derivatives ``j < degree``.
    """
    p = Polynomial(np.asarray(coeffs, dtype=float))
    deg = p.degree()
    derivs = tuple(p.deriv(j) for j in range(1, deg + 3))
    top = float(abs(p.coef[-1]) * math.factorial(deg))
    bounds = (None,) * deg + (top,) + (0.0,) * 2
    label = name or "poly[" + ",".join(f"{c:g}" for c in p.coef) + "]"
    return Signal(label, p, derivs, p.integ(), bounds)


def affine(slope: float = 2.0, intercept: float = 1.0) -> Signal:
    return polynomial([intercept, slope], name="affine")


def _sin() -> Signal:
    cycle = (np.sin, np.cos, lambda x: -np.sin(x), lambda x: -np.cos(x))
    return Signal(
        name="sin",
        f=np.sin,
        derivatives=tuple(cycle[j % 4] for j in range(1, 9)),
        antiderivative=lambda x: -np.cos(x),
        sup_bounds=(1.0,) * 9,
    )


def _cos() -> Signal:
    cycle = (np.cos, lambda x: -np.sin(x), lambda x: -np.cos(x), np.sin)
    return Signal(
        name="cos",
        f=np.cos,
        derivatives=tuple(cycle[j % 4] for j in range(1, 9)),
        antiderivative=np.sin,
        sup_bounds=(1.0,) * 9,
    )


def _gaussian() -> Signal:
    # d^n/dx^n exp(-x^2) = (-1)^n H_n(x) exp(-x^2)
    def deriv(n):
        return lambda x: (-1) ** n * eval_hermite(n, np.asarray(x, dtype=float)) * np.exp(-np.asarray(x, dtype=float) ** 2)

    grid = np.linspace(-8, 8, 160001)
    bounds = tuple(float(np.max(np.abs(deriv(n)(grid)))) for n in range(9))
    return Signal(
        name="gaussian",
        f=lambda x: np.exp(-np.asarray(x, dtype=float) ** 2),
        derivatives=tuple(deriv(n) for n in range(1, 9)),
        antiderivative=lambda x: 0.5 * math.sqrt(math.pi) * erf(x),
        sup_bounds=bounds,
    )


def _runge() -> Signal:
    """``1/(1 + 25 x^2)``; ``sup_bounds[n] = n! 5^n`` (exact for even ``n``)."""

    # 1/(1+25x^2) = Re 1/(1+5ix) for real x
    def deriv(n):
        return lambda x: np.real(
            (-1) ** n * math.factorial(n) * (5j) ** n
            / (1 + 5j * np.asarray(x, dtype=float)) ** (n + 1)
        )

    return Signal(
        name="runge",
        f=lambda x: 1.0 / (1.0 + 25.0 * np.asarray(x, dtype=float) ** 2),
        derivatives=tuple(deriv(n) for n in range(1, 9)),
        antiderivative=lambda x: np.arctan(5 * np.asarray(x, dtype=float)) / 5,
        sup_bounds=tuple(float(math.factorial(n) * 5**n) for n in range(9)),
    )


CATALOG = ("const", "affine", "sin", "cos", "gaussian", "runge")


def signal_from_name(name: str) -> Signal:
    """Look up a built-in signal (``const`` is 1, ``affine`` is ``2x + 1``)."""
    key = name.lower()
    if key == "const":
        return _const(1.0)
    if key == "affine":
        return affine()
    if key == "sin":
        return _sin()
    if key == "cos":
        return _cos()
    if key == "gaussian":
        return _gaussian()
    if key == "runge":
        return _runge()
    raise InvalidParameter(f"unknown signal {name!r}; choose from {CATALOG}")


def constant(c: float) -> Signal:
    return _const(float(c))
