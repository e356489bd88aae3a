"""Spline-combination kernels with vanishing discrete moments.

A kernel ``chi_r(x) = sum_mu a_mu M_r(x - eps_mu)`` has Fourier transform
``M_r^(v) * sum_mu a_mu exp(-i eps_mu v)``.  Because ``M_r^`` already
vanishes to order ``r`` at every ``2 pi k != 0``, the moment conditions up to
order ``r - 1`` reduce to matching the trigonometric sum with the Maclaurin
expansion of ``1 / M_r^`` up to ``v**(r-1)``:

    sum_mu a_mu (-i eps_mu)**j = c_j,   c_j = (1/M_r^)^(j)(0),  j < r.

``1/M_r^`` is even and real, so ``c_j = 0`` for odd ``j`` and dividing row
``j`` by ``(-i)**j`` gives the real Vandermonde system

    sum_mu a_mu eps_mu**j = i**j c_j = (-1)**(j/2) c_j  (j even), 0 (j odd).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import IllConditionedShifts, InvalidOrder, InvalidParameter
from .kernels import Compact, Kernel, eval_bspline

MAX_SERIES_TERMS = 16
MIN_SHIFT_GAP = 1e-8


@dataclass(frozen=True)
class TaylorCoefficients:
    """Derivatives ``c_j`` of ``1/M_r^`` at the origin, ``j = 0..count-1``."""

    values: tuple[float, ...]
    exact: tuple[Fraction, ...]


def _series_mul(a: list[Fraction], b: list[Fraction], n: int) -> list[Fraction]:
    return [sum((a[i] * b[m - i] for i in range(m + 1)), Fraction(0)) for m in range(n)]


def _series_reciprocal(a: list[Fraction], n: int) -> list[Fraction]:
    out = [1 / a[0]]
    for m in range(1, n):
        out.append(-sum((a[i] * out[m - i] for i in range(1, m + 1)), Fraction(0)) / a[0])
    return out


def reciprocal_fourier_derivatives(r: int, count: int) -> TaylorCoefficients:
    """Maclaurin data of ``sinc(v/2)**-r`` (unnormalized sinc).

    The series of ``sin(v/2)/(v/2) = sum_m (-1)^m (v/2)^(2m) / (2m+1)!`` is
    raised to the power ``r`` and inverted term by term in exact rational
    arithmetic; ``c_j = j! * [v^j]``.
    """
    if int(r) != r or r < 1:
        raise InvalidOrder(f"spline order must be a positive integer, got {r!r}")
    if int(count) != count or not 1 <= count <= MAX_SERIES_TERMS:
        raise InvalidParameter(f"count must be in [1, {MAX_SERIES_TERMS}], got {count!r}")
    n = int(count)
    base = [Fraction(0)] * n
    for m in range(0, (n + 1) // 2):
        base[2 * m] = Fraction((-1) ** m, 2 ** (2 * m) * math.factorial(2 * m + 1))
    power = [Fraction(1)] + [Fraction(0)] * (n - 1)
    for _ in range(int(r)):
        power = _series_mul(power, base, n)
    recip = _series_reciprocal(power, n)
    exact = tuple(math.factorial(j) * c for j, c in enumerate(recip))
    return TaylorCoefficients(tuple(float(c) for c in exact), exact)


@dataclass(frozen=True, kw_only=True)
class SplineCombinationKernel(Kernel):
    """``sum_mu coefficients[mu] * M_r(x - shifts[mu])``."""

    spline_order: int
    shifts: tuple[float, ...]
    coefficients: tuple[float, ...]

    def __post_init__(self):
        if len(self.shifts) != len(self.coefficients):
            raise InvalidParameter("shifts and coefficients differ in length")
        if any(b <= a for a, b in zip(self.shifts, self.shifts[1:])):
            raise InvalidParameter(f"shifts must be strictly increasing: {self.shifts}")

    def _eval(self, u):
        total = np.zeros_like(u)
        for a, eps in zip(self.coefficients, self.shifts):
            total = total + a * eval_bspline(self.spline_order, u - eps)
        return total

    def knots(self):
        base = -self.spline_order / 2 + np.arange(self.spline_order + 1, dtype=float)
        return np.unique(np.concatenate([eps + base for eps in self.shifts]))


def spline_combination(
    spline_order: int,
    shifts: Sequence[float],
    coefficients: Sequence[float],
    name: str | None = None,
) -> SplineCombinationKernel:
    r = int(spline_order)
    shifts = tuple(float(e) for e in shifts)
    if not shifts:
        raise InvalidParameter("need at least one term")
    return SplineCombinationKernel(
        name=name or f"spline{r}[{','.join(f'{e:g}' for e in shifts)}]",
        support=Compact(shifts[0] - r / 2, shifts[-1] + r / 2),
        spline_order=r,
        shifts=shifts,
        coefficients=tuple(float(a) for a in coefficients),
    )


def matched_system(r: int, shifts: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    """Real Vandermonde matrix and right-hand side for order ``r``."""
    eps = np.asarray(shifts, dtype=float)
    c = reciprocal_fourier_derivatives(r, r).values
    rhs = np.array([(-1) ** (j // 2) * c[j] if j % 2 == 0 else 0.0 for j in range(r)])
    return np.vander(eps, r, increasing=True).T, rhs


def build_matched_kernel(r: int, shifts: Sequence[float]) -> SplineCombinationKernel:
    """Spline-combination kernel of order ``r`` whose moments 1..r-1 vanish.

    ``shifts`` are sorted before solving; they must be pairwise separated by
    at least ``1e-8``.
    """
    if isinstance(r, bool) or int(r) != r or not 2 <= r <= 8:
        raise InvalidOrder(f"builder order must be an integer in [2, 8], got {r!r}")
    r = int(r)
    eps = sorted(float(e) for e in shifts)
    if len(eps) != r:
        raise InvalidParameter(f"order {r} needs exactly {r} shifts, got {len(eps)}")
    if any(not math.isfinite(e) for e in eps):
        raise InvalidParameter("shifts must be finite")
    if min(b - a for a, b in zip(eps, eps[1:])) < MIN_SHIFT_GAP:
        raise IllConditionedShifts(f"shifts closer than {MIN_SHIFT_GAP:g}: {eps}")
    matrix, rhs = matched_system(r, eps)
    coeffs = np.linalg.solve(matrix, rhs)
    kernel = spline_combination(r, eps, coeffs)
    return kernel
