"""Exception types raised by dsgchain."""


class DSGError(Exception):
    """Base class for all dsgchain errors."""


class InvalidParameters(DSGError, ValueError):
    pass


class NonVacuumBoundary(DSGError, ValueError):
    """Boundary field values are not (near) multiples of pi."""


class StepLimitExceeded(DSGError, RuntimeError):
    pass


class NonFiniteState(DSGError, FloatingPointError):
    """The integrated field blew up (|phi| or |dphi| above the guard)."""


class NotPeriodic(DSGError, ValueError):
    pass


class NotPeriodicOrStepLike(DSGError, ValueError):
    pass


class NotBounded(DSGError, ValueError):
    """The period diverges (P at a separatrix level)."""


class QuadratureNotConverged(DSGError, ArithmeticError):
    pass


class EventNotFound(DSGError, RuntimeError):
    """Too few events on the trajectory; the horizon is too short."""


class MixedClasses(DSGError, ValueError):
    pass


class BranchTooSmall(DSGError, ValueError):
    pass


class TooFewRows(DSGError, ValueError):
    pass
