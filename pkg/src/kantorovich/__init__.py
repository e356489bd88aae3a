"""Sampling Kantorovich and generalized sampling operators with spline kernels."""

from .analysis import (
    RateReport,
    SaturationReport,
    gw_bound_check,
    polynomial_image,
    polynomial_image_check,
    rate_fit,
    rate_report,
    saturation_probe,
    sup_error,
)
from .errors import (
    DegenerateFit,
    DegreeTooHigh,
    DivergentMoment,
    IllConditionedShifts,
    InvalidOrder,
    InvalidParameter,
    KantorovichError,
    KernelNotCertified,
    MissingDerivatives,
    QuadratureNonconvergence,
    TruncationInfeasible,
)
from .kernel_builder import build_matched_kernel, reciprocal_fourier_derivatives, spline_combination
from .kernelfile import kernel_from_name
from .kernels import (
    Compact,
    Decay,
    Kernel,
    absolute_moment,
    bspline,
    certify,
    check_moment_condition,
    discrete_moment,
    fourier_moment_check,
    make_classical_kernel,
)
from .operators import (
    ShiftedGrid,
    generalized_apply,
    kantorovich_apply,
    kantorovich_shifted_apply,
    representation_decompose,
)
from .signals import Signal, polynomial, signal_from_name

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
