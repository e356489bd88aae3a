"""Exception types raised across the package."""


class KantorovichError(Exception):
    """Base class for all package errors."""


class InvalidOrder(KantorovichError, ValueError):
    pass


class InvalidParameter(KantorovichError, ValueError):
    pass


class DivergentMoment(KantorovichError, ArithmeticError):
    """The requested moment series does not converge absolutely."""


class TruncationInfeasible(KantorovichError, ArithmeticError):
    """A decaying series cannot be truncated within the requested budget."""


class QuadratureNonconvergence(KantorovichError, ArithmeticError):
    pass


class IllConditionedShifts(KantorovichError, ValueError):
    pass


class MissingDerivatives(KantorovichError, ValueError):
    pass


class DegenerateFit(KantorovichError, ValueError):
    """Raised when a log-log fit hits an (essentially) zero error."""


class KernelNotCertified(KantorovichError, ValueError):
    pass


class DegreeTooHigh(KantorovichError, ValueError):
    pass
