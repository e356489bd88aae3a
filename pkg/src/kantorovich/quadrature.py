"""Adaptive Gauss-Legendre quadrature.

Panels are refined in batches: every active panel is integrated once with
the full rule and once as two halves, and the panels whose two estimates
disagree by more than their share of the tolerance are bisected.  The
integrand must accept and return numpy arrays; complex values are fine.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import QuadratureNonconvergence

ORDER = 16
TOL = 1e-10
_EPS = np.finfo(float).eps


@lru_cache(maxsize=None)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [-1, 1]."""
    return np.polynomial.legendre.leggauss(order)


def fixed_rule(f: Callable, a, b, order: int = ORDER) -> np.ndarray:
    """Apply one Gauss-Legendre rule on each panel ``[a_i, b_i]``."""
    nodes, weights = gauss_legendre(order)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    x = mid[..., None] + half[..., None] * nodes
    return half * (f(x) @ weights)


def _split_sum(values: np.ndarray) -> complex | float:
    if np.iscomplexobj(values):
        return complex(math.fsum(values.real), math.fsum(values.imag))
    return math.fsum(values)


def integrate(
    f: Callable,
    a: float,
    b: float,
    *,
    tol: float = TOL,
    order: int = ORDER,
    breakpoints: Sequence[float] = (),
    panels: int = 1,
    max_panels: int = 2_000_000,
    max_levels: int = 40,
) -> tuple[float | complex, float]:
    """Integrate ``f`` over ``[a, b]``; returns ``(value, error_estimate)``.

    ``breakpoints`` inside ``(a, b)`` become panel edges, which is how
    kinks of piecewise-polynomial integrands are handled.  ``panels``
    subdivides each resulting piece uniformly before refinement starts.

    Raises QuadratureNonconvergence if the estimated absolute error cannot
    be brought under ``tol``.
    """
    if not b > a:
        raise ValueError(f"need a < b, got [{a}, {b}]")
    cuts = sorted({float(a), float(b), *(float(p) for p in breakpoints if a < p < b)})
    edges = np.concatenate(
        [np.linspace(lo, hi, panels + 1)[:-1] for lo, hi in zip(cuts[:-1], cuts[1:])]
        + [np.array([cuts[-1]])]
    )
    lo, hi = edges[:-1], edges[1:]
    total_width = b - a

    accepted: list[np.ndarray] = []
    error = 0.0
    for _ in range(max_levels):
        if lo.size > max_panels:
            break
        mid = 0.5 * (lo + hi)
        coarse = fixed_rule(f, lo, hi, order)
        fine = fixed_rule(f, lo, mid, order) + fixed_rule(f, mid, hi, order)
        err = np.abs(fine - coarse)
        share = tol * (hi - lo) / total_width
        ok = (err <= share) | (err <= 64 * _EPS * np.abs(fine))
        accepted.append(fine[ok])
        error += float(np.sum(err[ok]))
        if ok.all():
            value = _split_sum(np.concatenate(accepted))
            return value, error
        bad = ~ok
        lo = np.concatenate([lo[bad], mid[bad]])
        hi = np.concatenate([mid[bad], hi[bad]])
    raise QuadratureNonconvergence(
        f"adaptive Gauss-Legendre did not reach tol={tol:g} on [{a}, {b}]"
    )
