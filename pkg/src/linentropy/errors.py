"""Exception hierarchy shared by all modules."""


class LinentropyError(Exception):
    """Base class for every error raised by this package."""


class StructureError(LinentropyError, ValueError):
    """Shapes, dimensions or subsystem indices do not fit together."""


class ParameterError(LinentropyError, ValueError):
    """A scalar argument lies outside its admissible domain."""


class ValidationError(LinentropyError, ValueError):
    """A matrix failed density-matrix validation.

    The offending :class:`~linentropy.states.ValidationReport` is kept on
    ``report`` so callers can inspect the individual defects.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NumericalError(LinentropyError, ArithmeticError):
    """An iterative routine failed to converge or bracket its root."""
