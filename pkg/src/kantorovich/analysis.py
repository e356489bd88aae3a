"""Measurement harness: sup-norm errors, rate fits and saturation probes."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from numpy.polynomial import Polynomial

from .errors import DegenerateFit, DegreeTooHigh, InvalidParameter, KernelNotCertified, MissingDerivatives
from .kernels import Kernel, absolute_moment, is_certified
from .operators import UNSHIFTED, ShiftedGrid, apply_many
from .signals import Signal, polynomial

DEFAULT_WS = (16, 32, 64, 128, 256)
DEGENERATE_ERROR = 1e-14
BOUND_SLACK = 1e-10
IMAGE_TOL = 1e-10
SATURATION_ATOL = 1e-9


def x_grid(lo: float = -math.pi, hi: float = math.pi, n: int = 1001) -> np.ndarray:
    return np.linspace(lo, hi, n)


def _op_tag(op: str) -> str:
    tag = {"S^pi": "Spi", "S_pi": "Spi", "Spi": "Spi", "G": "G", "S": "S"}.get(op)
    if tag is None:
        raise InvalidParameter(f"unknown operator {op!r}; use G, S or Spi")
    return tag


def sup_error(
    kernel: Kernel,
    signal: Signal,
    op: str,
    w: float,
    xs,
    *,
    grid: ShiftedGrid = UNSHIFTED,
) -> float:
    """``max_x |(Op_w f)(x) - f(x)|`` over the points ``xs``."""
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if xs.size == 0:
        raise InvalidParameter("x grid is empty")
    approx = apply_many(_op_tag(op), kernel, signal, w, xs, grid=grid)
    return float(np.max(np.abs(approx - signal.f(xs))))


def rate_fit(samples: Sequence[tuple[float, float]]) -> tuple[float, float]:
    """Least-squares slope of ``log(error)`` against ``log(w)``.

    Returns ``(slope, residual)`` where the residual is the largest absolute
    deviation of the log data from the fitted line.
    """
    if len(samples) < 3:
        raise InvalidParameter(f"need at least 3 samples, got {len(samples)}")
    ws = np.array([s[0] for s in samples], dtype=float)
    errs = np.array([s[1] for s in samples], dtype=float)
    if np.any(errs <= DEGENERATE_ERROR):
        raise DegenerateFit("an error is at rounding level; the rate is not applicable")
    lw, le = np.log(ws), np.log(errs)
    slope, intercept = np.polyfit(lw, le, 1)
    residual = float(np.max(np.abs(le - (slope * lw + intercept))))
    return float(slope), residual


@dataclass(frozen=True)
class RateReport:
    kernel: str
    signal: str
    operator: str
    samples: tuple[tuple[float, float], ...]
    fitted_slope: float
    fit_residual: float
    grid_spec: tuple[float, float, int]

    @property
    def ws(self) -> tuple[float, ...]:
        return tuple(w for w, _ in self.samples)

    @property
    def errors(self) -> tuple[float, ...]:
        return tuple(e for _, e in self.samples)


def rate_report(
    kernel: Kernel,
    signal: Signal,
    op: str,
    ws: Iterable[float] = DEFAULT_WS,
    xs=None,
    *,
    grid: ShiftedGrid = UNSHIFTED,
) -> RateReport:
    """Sweep ``w``, measure sup errors and fit the convergence exponent.

    If some error is at rounding level the slope and residual are NaN.
    """
    xs = x_grid() if xs is None else np.asarray(xs, dtype=float)
    ws = sorted(float(w) for w in ws)
    if not ws or any(b <= a for a, b in zip(ws, ws[1:])):
        raise InvalidParameter("w values must be distinct")
    samples = tuple((w, sup_error(kernel, signal, op, w, xs, grid=grid)) for w in ws)
    try:
        slope, residual = rate_fit(samples)
    except DegenerateFit:
        slope = residual = float("nan")
    return RateReport(kernel.name, signal.name, _op_tag(op), samples, slope, residual,
                      (float(xs[0]), float(xs[-1]), int(xs.size)))


@dataclass(frozen=True)
class SaturationReport:
    kernel: str
    signal: str
    ws: tuple[float, ...]
    deviations: tuple[float, ...]
    verdict: bool

    @property
    def ratios(self) -> tuple[float, ...]:
        """``d(w_{i+1}) / d(w_i)``; about 1/2 per doubling when d is O(1/w)."""
        d = self.deviations
        return tuple(b / a if a > 0 else float("nan") for a, b in zip(d, d[1:]))


def _require_certified(kernel: Kernel, r: int) -> None:
    if not is_certified(kernel, r):
        raise KernelNotCertified(f"{kernel.name} does not satisfy the moment condition for r={r}")


def saturation_probe(
    kernel: Kernel,
    signal: Signal,
    ws: Iterable[float] = (32, 64, 128, 256, 512),
    xs=None,
) -> SaturationReport:
    """Measure ``d(w) = max_x |w (S_w f - f)(x) - f'(x)/2|`` over a w sweep.

    With vanishing first moment, ``G_w f - f`` is O(w^-2) and the only
    first-order part of ``S_w f - f`` is ``f'/(2w)``, so d(w) should decay
    like 1/w.  The verdict asks for d to be non-increasing along the sweep
    and to drop at least fourfold from the first to the last w (values under
    1e-9 count as zero).  That is a desk-scale reading of a limit, not a
    proof of one.
    """
    _require_certified(kernel, 2)
    if len(signal.derivatives) < 2:
        raise MissingDerivatives("the saturation probe needs f' and f''")
    xs = x_grid() if xs is None else np.asarray(xs, dtype=float)
    ws = tuple(sorted(float(w) for w in ws))
    fx = signal.f(xs)
    half_slope = 0.5 * signal.derivative(1)(xs)
    devs = []
    for w in ws:
        sw = apply_many("S", kernel, signal, w, xs)
        devs.append(float(np.max(np.abs(w * (sw - fx) - half_slope))))
    atol = SATURATION_ATOL
    monotone = all(b <= a + atol for a, b in zip(devs, devs[1:]))
    verdict = monotone and (devs[-1] <= devs[0] / 4 or devs[-1] <= atol)
    return SaturationReport(kernel.name, signal.name, ws, tuple(devs), verdict)


def polynomial_image(coeffs: Sequence[float], w: float, r: int) -> Polynomial:
    """``sum_{j<r} w^-j/(j+1)! p^(j)``, the image of ``p`` under ``S_w``."""
    p = Polynomial(np.asarray(coeffs, dtype=float))
    image = Polynomial([0.0])
    for j in range(r):
        image = image + p.deriv(j) * (w ** (-j) / math.factorial(j + 1))
    return image


def polynomial_image_check(
    kernel: Kernel,
    coeffs: Sequence[float],
    w: float,
    xs=None,
    r: int | None = None,
    tol: float = IMAGE_TOL,
) -> bool:
    """Does ``S_w p`` coincide with :func:`polynomial_image` on ``xs``?

    ``coeffs`` are ascending.  ``r`` defaults to ``degree + 1``; the kernel
    must satisfy the moment condition of order ``r``.
    """
    p = Polynomial(np.asarray(coeffs, dtype=float))
    deg = p.degree()
    r = deg + 1 if r is None else int(r)
    if deg > r - 1:
        raise DegreeTooHigh(f"degree {deg} exceeds r - 1 = {r - 1}")
    _require_certified(kernel, r)
    xs = x_grid(-1.0, 1.0, 101) if xs is None else np.asarray(xs, dtype=float)
    sw = apply_many("S", kernel, polynomial(coeffs), w, xs)
    dev = float(np.max(np.abs(sw - polynomial_image(coeffs, w, r)(xs))))
    return dev <= tol


def gw_bound_check(
    kernel: Kernel,
    signal: Signal,
    r: int,
    ws: Iterable[float] = DEFAULT_WS,
    xs=None,
) -> bool:
    """``||G_w f - f|| <= ||f^(r)|| M_r(chi) / r! * w^-r`` for every w in ``ws``."""
    _require_certified(kernel, r)
    sup = signal.sup_bound(r)
    if sup is None:
        raise MissingDerivatives(f"need a sup bound for derivative {r} of {signal.name!r}")
    xs = x_grid() if xs is None else np.asarray(xs, dtype=float)
    m_r = absolute_moment(kernel, r)
    for w in ws:
        bound = sup * m_r / math.factorial(r) * float(w) ** (-r)
        if not sup_error(kernel, signal, "G", w, xs) <= bound + BOUND_SLACK:
            return False
    return True


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

RATE_COLUMNS = ("kernel", "signal", "operator", "w", "sup_error")
SATURATION_COLUMNS = ("kernel", "signal", "w", "saturation_deviation")


def rate_csv(reports: Iterable[RateReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(RATE_COLUMNS)
    for rep in reports:
        for w, err in rep.samples:
            writer.writerow([rep.kernel, rep.signal, rep.operator, repr(w), repr(err)])
    return buf.getvalue()


def saturation_csv(reports: Iterable[SaturationReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SATURATION_COLUMNS)
    for rep in reports:
        for w, d in zip(rep.ws, rep.deviations):
            writer.writerow([rep.kernel, rep.signal, repr(w), repr(d)])
    return buf.getvalue()


def write_loglog_svg(series: Sequence[tuple[str, Sequence[float], Sequence[float]]], path,
                     ylabel: str = "sup error") -> None:
    """One static log-log line plot; ``series`` holds ``(label, ws, values)``."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "kantorovich"
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for label, ws, values in series:
        ax.loglog(ws, values, "o-", label=label)
    ax.set_xlabel("w")
    ax.set_ylabel(ylabel)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.savefig(path, format="svg", bbox_inches="tight", metadata={"Date": None})
    plt.close(fig)
