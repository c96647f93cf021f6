"""Exception taxonomy shared by all qvir modules."""


class QvirError(Exception):
    """Base class for all package errors."""


class UsageError(QvirError):
    """Caller violated a documented precondition (bad flag, bad window, bad argument)."""


class ParseError(QvirError):
    """Malformed expression text passed to the element parser."""


class DomainError(QvirError):
    """Division by an exactly-zero polynomial or rational."""


class MismatchedTablesError(UsageError):
    """Two elements over different symbol tables were combined."""


class EvaluationPoleError(QvirError):
    """A denominator vanished at the requested evaluation point."""


class DegenerateParameterError(QvirError):
    """A structurally required denominator factor vanished at this parameter point.

    Numeric callers are expected to re-randomize the point and retry.
    """


class WindowUnderflowError(QvirError):
    """An operation cannot certify any coefficient on the requested degree window."""


class OutOfWindowError(QvirError):
    """A coefficient outside the certified window was requested."""


class NonInvertibleError(QvirError):
    """Series inversion requested for a series with a non-invertible leading term."""


class NonExpandableError(UsageError):
    """A quantum-dilogarithm argument violates the smallness invariant."""


class LimitFailureError(QvirError):
    """A coefficient has a pole at the limit point that was supposed to be regular."""


class NoSolutionError(QvirError):
    """The parameter map has no solution with integer contour multiplicities."""
