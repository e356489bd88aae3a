"""Kernels for sampling-type operators and their discrete moments.

Two sinc conventions appear here and they are kept apart on purpose:

* ``sinc_unnormalized(t) = sin(t)/t`` is the one in the Fourier transform of
  the central B-splines, ``M_n^(v) = sinc_unnormalized(v/2)**n``.
* ``numpy.sinc(t) = sin(pi t)/(pi t)`` (normalized) is the one used by the
  Jackson-type kernels and by :func:`compute_jackson_norm`.

A kernel is either compactly supported or decays like ``C |u|**-p``; the
support metadata decides how the series ``sum_k chi(u - k) ...`` are summed
(exactly over a finite window, or truncated with an explicit tail bound).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from . import quadrature
from .errors import (
    DivergentMoment,
    InvalidOrder,
    InvalidParameter,
    KernelNotCertified,
    QuadratureNonconvergence,
    TruncationInfeasible,
)

MAX_BSPLINE_ORDER = 12
# Largest truncation radius a decaying series may need before we give up.
MAX_RADIUS = 10_000_000
_CHUNK = 1 << 20


@dataclass(frozen=True)
class Compact:
    lo: float
    hi: float


@dataclass(frozen=True)
class Decay:
    """``|chi(u)| <= constant * |u|**-order`` for ``|u| >= 1``."""

    order: float
    constant: float


Support = Compact | Decay


def sinc_unnormalized(t):
    return np.sinc(np.asarray(t, dtype=float) / np.pi)


@dataclass(frozen=True, kw_only=True)
class Kernel:
    """A real kernel ``chi`` together with its support/decay metadata.

    Subclasses implement ``_eval`` on float arrays.  ``evaluate`` accepts
    scalars or arrays and forces exact zeros outside a compact support.
    """

    name: str
    support: Support
    moment_order_certified: int | None = field(default=None, compare=False)

    def _eval(self, u: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def evaluate(self, u):
        arr = np.asarray(u, dtype=float)
        out = np.asarray(self._eval(arr), dtype=float)
        if isinstance(self.support, Compact):
            out = np.where((arr < self.support.lo) | (arr > self.support.hi), 0.0, out)
        return float(out) if out.ndim == 0 else out

    __call__ = evaluate

    def knots(self) -> np.ndarray:
        """Points where the kernel is not smooth (empty for smooth kernels)."""
        return np.empty(0)

    @property
    def is_compact(self) -> bool:
        return isinstance(self.support, Compact)


# ---------------------------------------------------------------------------
# Central B-splines
# ---------------------------------------------------------------------------


def _check_bspline_order(n) -> int:
    if isinstance(n, bool) or int(n) != n or not 1 <= n <= MAX_BSPLINE_ORDER:
        raise InvalidOrder(
            f"B-spline order must be an integer in [1, {MAX_BSPLINE_ORDER}], got {n!r}"
        )
    return int(n)


def eval_bspline(n: int, x):
    """Central B-spline ``M_n`` from the truncated-power alternating sum.

    ``M_n`` is even, so the sum is evaluated at ``-|x|`` where only the
    terms with ``i < n/2`` are active; this keeps the cancellation mild up to
    ``n = 12``.  Beyond that the closed form is not trusted and
    :class:`InvalidOrder` is raised.  ``M_1(+-1/2) = 1/2``.
    """
    n = _check_bspline_order(n)
    arr = np.asarray(x, dtype=float)
    t = -np.abs(arr)
    half = n / 2
    total = np.zeros_like(t)
    for i in range(n + 1):
        s = half + t - i
        if n == 1:
            term = np.where(s > 0, 1.0, np.where(s == 0, 0.5, 0.0))
        else:
            term = np.maximum(s, 0.0) ** (n - 1)
        total = total + (-1) ** i * math.comb(n, i) * term
    out = total / math.factorial(n - 1)
    outside = np.abs(arr) > half if n == 1 else np.abs(arr) >= half
    out = np.where(outside, 0.0, out)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True, kw_only=True)
class CentralBSpline(Kernel):
    order: int

    def _eval(self, u):
        return eval_bspline(self.order, u)

    def knots(self):
        return -self.order / 2 + np.arange(self.order + 1, dtype=float)


def bspline(n: int) -> CentralBSpline:
    n = _check_bspline_order(n)
    return CentralBSpline(name=f"bspline{n}", support=Compact(-n / 2, n / 2), order=n)


# ---------------------------------------------------------------------------
# Classical band-limited kernels
# ---------------------------------------------------------------------------

CLASSICAL = ("fejer", "vallee_poussin", "sinc_product", "jackson")


def _jackson_tail_bound(k: int, T: float) -> tuple[float, float]:
    """Split ``int_T^inf sinc(t)**(2k) dt`` (normalized sinc).

    Returns ``(mean_part, oscillation_bound)``: by power reduction
    ``sin^{2k}`` is a constant plus cosines of frequency ``2m pi``; the
    constant contributes ``mean_part`` exactly and every cosine term is
    bounded by ``2 / (omega T^{2k})`` after one integration by parts.
    """
    q = 2 * k
    scale = np.pi ** (-q)
    mean = scale * math.comb(q, k) / 2**q * T ** (1 - q) / (q - 1)
    osc = scale * 2.0 ** (1 - q) * sum(
        math.comb(q, k - m) * 2.0 / (2 * m * np.pi * T**q) for m in range(1, k + 1)
    )
    return mean, osc


def compute_jackson_norm(k: int, alpha: float = 1.0, *, tol: float = 1e-10) -> float:
    """Normalization ``c_k = 1 / int sinc(u/(2 k pi alpha))**(2k) du``.

    Uses the normalized sinc.  The integral is ``2 k pi alpha`` times
    ``I_k = int sinc(t)**(2k) dt``, which is integrated adaptively on
    ``[0, T]`` with the tail beyond ``T`` handled by
    :func:`_jackson_tail_bound`.
    """
    if isinstance(k, bool) or int(k) != k or k < 1:
        raise InvalidParameter(f"Jackson index k must be a positive integer, got {k!r}")
    if not alpha >= 1:
        raise InvalidParameter(f"Jackson alpha must be >= 1, got {alpha!r}")
    k = int(k)
    budget = 1e-3 * tol
    _, osc1 = _jackson_tail_bound(k, 1.0)
    T = max(1, math.ceil((osc1 / budget) ** (1 / (2 * k))))
    mean_tail, osc = _jackson_tail_bound(k, float(T))
    if osc > budget:  # pragma: no cover - T is chosen to make this impossible
        raise QuadratureNonconvergence("Jackson tail bound not met")
    body, err = quadrature.integrate(
        lambda t: np.sinc(t) ** (2 * k), 0.0, float(T), tol=tol / 4, panels=T
    )
    if err > tol:
        raise QuadratureNonconvergence(f"Jackson norm error estimate {err:g} > {tol:g}")
    half_integral = body + mean_tail
    return 1.0 / (2 * k * np.pi * alpha * 2 * half_integral)


@dataclass(frozen=True, kw_only=True)
class ClassicalKernel(Kernel):
    which: str
    k: int = 1
    alpha: float = 1.0
    norm: float = 1.0

    def _eval(self, u):
        if self.which == "fejer":
            return 0.5 * np.sinc(u / 2) ** 2
        if self.which == "vallee_poussin":
            return 1.5 / np.pi * np.sinc(u / (2 * np.pi)) * np.sinc(3 * u / (2 * np.pi))
        if self.which == "sinc_product":
            return np.sinc(u / 2) * np.sinc(u)
        return self.norm * np.sinc(u / (2 * self.k * np.pi * self.alpha)) ** (2 * self.k)

    @property
    def params(self) -> dict:
        if self.which == "jackson":
            return {"k": self.k, "alpha": self.alpha}
        return {}


def make_classical_kernel(which: str, *, k: int = 1, alpha: float = 1.0) -> ClassicalKernel:
    """Fejer, de la Vallee Poussin, sinc-product or Jackson-type kernel.

    Removable singularities are filled with their limits (``numpy.sinc``
    does this at 0).  All four decay like ``|u|**-2`` except Jackson, which
    decays like ``|u|**-2k``.
    """
    key = which.lower().replace("-", "_").replace(" ", "_")
    key = {"valleepoussin": "vallee_poussin", "sincproduct": "sinc_product"}.get(key, key)
    if key == "fejer":
        return ClassicalKernel(name="fejer", which=key, support=Decay(2, 2 / np.pi**2))
    if key == "vallee_poussin":
        return ClassicalKernel(name="vallee_poussin", which=key, support=Decay(2, 2 / np.pi))
    if key == "sinc_product":
        return ClassicalKernel(name="sinc_product", which=key, support=Decay(2, 2 / np.pi**2))
    if key == "jackson":
        norm = compute_jackson_norm(k, alpha)
        k = int(k)
        return ClassicalKernel(
            name=f"jackson{k}" if alpha == 1 else f"jackson{k}:{alpha:g}",
            which=key,
            k=k,
            alpha=float(alpha),
            norm=norm,
            support=Decay(2 * k, norm * (2 * k * alpha) ** (2 * k)),
        )
    raise InvalidParameter(f"unknown classical kernel {which!r}; choose from {CLASSICAL}")


# ---------------------------------------------------------------------------
# Discrete moments
# ---------------------------------------------------------------------------


def tail_radius(decay: Decay, beta: float, budget: float, scale: float = 1.0) -> int:
    """Smallest integer ``R >= 1`` whose two-sided tail is under ``budget``.

    The tail is ``scale * sum_{|u-k| > R} C |u-k|**(beta - p)``, bounded by
    ``2 scale C (R**-q + R**(1-q)/(q-1))`` with ``q = p - beta``.
    """
    q = decay.order - beta
    if q <= 1:
        raise DivergentMoment(
            f"decay order {decay.order:g} does not exceed beta + 1 = {beta + 1:g}"
        )
    c = 2 * scale * decay.constant

    def bound(R: float) -> float:
        return c * (R**-q + R ** (1 - q) / (q - 1))

    if bound(1.0) <= budget:
        return 1
    hi = 2
    while bound(hi) > budget:
        hi *= 2
        if hi > 4 * MAX_RADIUS:
            raise TruncationInfeasible(
                f"tail budget {budget:g} needs a window wider than {MAX_RADIUS} terms"
            )
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if bound(mid) <= budget:
            hi = mid
        else:
            lo = mid
    if hi > MAX_RADIUS:
        raise TruncationInfeasible(
            f"tail budget {budget:g} needs a window of radius {hi} > {MAX_RADIUS}"
        )
    return hi


def _moment_sums(
    kernel: Kernel, u: np.ndarray, power: float, absolute: bool, tail_budget: float
) -> np.ndarray:
    def terms(d):
        vals = kernel.evaluate(d)
        if absolute:
            return np.abs(vals) * np.abs(d) ** power
        return vals * d**power

    u = np.atleast_1d(np.asarray(u, dtype=float))
    if isinstance(kernel.support, Compact):
        lo, hi = kernel.support.lo, kernel.support.hi
        k0 = np.ceil(u - hi)
        width = int(math.floor(hi - lo)) + 2
        d = u[:, None] - (k0[:, None] + np.arange(width))
        return np.array([math.fsum(row) for row in terms(d)])

    R = tail_radius(kernel.support, power, tail_budget)
    out = np.empty_like(u)
    for i, ui in enumerate(u):
        ks = np.arange(math.ceil(ui - R), math.floor(ui + R) + 1, dtype=float)
        partial = [float(np.sum(terms(ui - ks[s : s + _CHUNK]))) for s in range(0, ks.size, _CHUNK)]
        out[i] = math.fsum(partial)
    return out


def discrete_moment(kernel: Kernel, j: int, u, *, tail_budget: float = 1e-12):
    """``m_j(chi, u) = sum_k chi(u-k) (u-k)**j`` (vectorized over ``u``)."""
    if int(j) != j or j < 0:
        raise InvalidParameter(f"moment order must be a nonnegative integer, got {j!r}")
    arr = np.asarray(u, dtype=float)
    out = _moment_sums(kernel, arr, int(j), False, tail_budget)
    return float(out[0]) if arr.ndim == 0 else out


def absolute_moment_sums(kernel: Kernel, beta: float, u, *, tail_budget: float = 1e-9):
    """``sum_k |chi(u-k)| |u-k|**beta`` (vectorized over ``u``)."""
    arr = np.asarray(u, dtype=float)
    out = _moment_sums(kernel, arr, beta, True, tail_budget)
    return float(out[0]) if arr.ndim == 0 else out


def sup_grid(kernel: Kernel, n: int = 1001) -> np.ndarray:
    """Dense grid of ``[0, 1)`` plus the fractional parts of all knots."""
    grid = np.arange(n) / n
    knots = np.mod(kernel.knots(), 1.0)
    return np.unique(np.concatenate([grid, knots[knots < 1.0]]))


def absolute_moment(kernel: Kernel, beta: float, *, n_grid: int = 1001,
                    tail_budget: float = 1e-9) -> float:
    """``M_beta(chi)``: sup over one period of the absolute moment sum.

    The sum is 1-periodic in ``u``, so the sup is taken on a dense grid of
    ``[0, 1)`` together with the knot locations, and the best few grid
    points are then polished by a bounded scalar search (interior maxima
    of a piecewise polynomial rarely sit on a grid point).  For decaying
    kernels the series is truncated with tail at most ``tail_budget``.
    """
    if beta < 0:
        raise InvalidParameter(f"beta must be nonnegative, got {beta!r}")
    grid = sup_grid(kernel, n_grid)
    sums = absolute_moment_sums(kernel, beta, grid, tail_budget=tail_budget)
    best = float(np.max(sums))
    if not kernel.is_compact:
        return best

    h = 1.0 / n_grid
    for i in np.argsort(sums)[-3:]:
        res = minimize_scalar(
            lambda v: -absolute_moment_sums(kernel, beta, v, tail_budget=tail_budget),
            bounds=(grid[i] - h, grid[i] + h),
            method="bounded",
            options={"xatol": 1e-12},
        )
        best = max(best, -float(res.fun))
    return best


@dataclass(frozen=True)
class MomentReport:
    beta: float
    grid: tuple[float, ...]
    values: tuple[float, ...]
    max_abs_deviation: float
    divergent: bool = False


def default_u_grid(n: int = 201) -> np.ndarray:
    return np.arange(n) / n


def check_moment_condition(
    kernel: Kernel,
    r: int,
    u_grid: Sequence[float] | None = None,
    tol: float = 1e-9,
    *,
    tail_budget: float = 1e-12,
) -> tuple[bool, tuple[MomentReport, ...]]:
    """Do the discrete moments ``m_j``, ``j = 1..r-1``, vanish on ``u_grid``?

    Returns ``(passed, reports)`` with one report per ``j = 1..r``; the
    ``j = r`` report is informational only.  A moment whose series does not
    converge absolutely cannot satisfy the condition: it is reported with
    ``divergent=True`` and NaN values and the check fails.
    """
    if int(r) != r or r < 1:
        raise InvalidParameter(f"r must be a positive integer, got {r!r}")
    grid = default_u_grid() if u_grid is None else np.asarray(u_grid, dtype=float)
    passed = True
    reports = []
    for j in range(1, int(r) + 1):
        try:
            values = np.atleast_1d(discrete_moment(kernel, j, grid, tail_budget=tail_budget))
        except DivergentMoment:
            nan = (float("nan"),) * grid.size
            reports.append(MomentReport(j, tuple(grid), nan, float("inf"), divergent=True))
            if j < r:
                passed = False
            continue
        dev = float(np.max(np.abs(values)))
        reports.append(MomentReport(j, tuple(grid), tuple(values.tolist()), dev))
        if j < r and not dev <= tol:
            passed = False
    return passed, tuple(reports)


def certify(kernel: Kernel, r: int, **kwargs) -> Kernel:
    """Return a copy of ``kernel`` marked as satisfying the order-``r`` condition.

    Raises KernelNotCertified when it does not.
    """
    ok, _ = check_moment_condition(kernel, r, **kwargs)
    if not ok:
        raise KernelNotCertified(f"{kernel.name} fails the vanishing-moment check for r={r}")
    return replace(kernel, moment_order_certified=int(r))


def is_certified(kernel: Kernel, r: int) -> bool:
    if kernel.moment_order_certified is not None and kernel.moment_order_certified >= r:
        return True
    return check_moment_condition(kernel, r)[0]


# ---------------------------------------------------------------------------
# Fourier side
# ---------------------------------------------------------------------------


def fourier_moments(kernel: Kernel, r: int, k_range: int, *, tol: float = 1e-10,
                    max_radius: float = 1e6) -> dict[tuple[int, int], complex]:
    """``chi^(j)(2 pi k) = int chi(u) (-i u)**j exp(-2 pi i k u) du``.

    Keys are ``(j, k)`` for ``j < r`` and ``|k| <= k_range``.  Compact
    kernels are integrated over their support split at the knots; decaying
    kernels over a symmetric window whose tail is bounded from the decay
    metadata.
    """
    if isinstance(kernel.support, Compact):
        lo, hi = kernel.support.lo, kernel.support.hi
        breaks = kernel.knots()
        panels = 1
    else:
        p, C = kernel.support.order, kernel.support.constant
        radius = 1.0
        for j in range(r):
            if p <= j + 1:
                raise DivergentMoment(
                    f"{kernel.name}: derivative {j} of the Fourier transform is not "
                    f"given by an absolutely convergent integral (decay order {p:g})"
                )
            # two-sided tail 2 C L**(j+1-p) / (p-j-1) <= tol / 2
            radius = max(radius, (4 * C / ((p - j - 1) * tol)) ** (1 / (p - j - 1)))
        if radius > max_radius:
            raise QuadratureNonconvergence(
                f"{kernel.name}: truncation radius {radius:.3g} exceeds {max_radius:g}"
            )
        hi = float(math.ceil(radius))
        lo = -hi
        breaks = ()
        panels = int(2 * hi)
    out = {}
    for j in range(r):
        for k in range(-k_range, k_range + 1):
            omega = 2 * np.pi * k

            def integrand(u, j=j, omega=omega):
                return kernel.evaluate(u) * (-1j * u) ** j * np.exp(-1j * omega * u)

            value, err = quadrature.integrate(
                integrand, lo, hi, tol=tol / 2, breakpoints=breaks, panels=panels
            )
            out[(j, k)] = complex(value)
    return out


def fourier_moment_check(kernel: Kernel, r: int, k_range: int = 2, tol: float = 1e-8) -> bool:
    """Fourier-side form of the vanishing-moment condition.

    True iff ``chi^(0)(0) = 1`` and every other ``chi^(j)(2 pi k)`` with
    ``j < r``, ``|k| <= k_range`` vanishes, all to ``tol``.  Kernels whose
    transform derivatives do not exist as absolutely convergent integrals
    fail.
    """
    if int(r) != r or r < 1 or int(k_range) != k_range or k_range < 1:
        raise InvalidParameter("need integers r >= 1 and k_range >= 1")
    try:
        table = fourier_moments(kernel, int(r), int(k_range), tol=min(1e-10, tol / 10))
    except DivergentMoment:
        return False
    for (j, k), value in table.items():
        target = 1.0 if j == 0 and k == 0 else 0.0
        if not abs(value - target) <= tol:
            return False
    return True


def partition_of_unity_error(kernel: Kernel, u_grid=None, *, tail_budget: float = 1e-6) -> float:
    """``max |sum_k chi(u - k) - 1|`` over ``u_grid`` (default 101 points of [0, 1))."""
    grid = default_u_grid(101) if u_grid is None else np.asarray(u_grid, dtype=float)
    sums = np.atleast_1d(discrete_moment(kernel, 0, grid, tail_budget=tail_budget))
    return float(np.max(np.abs(sums - 1.0)))
