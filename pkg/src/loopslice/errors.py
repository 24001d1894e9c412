"""Exception hierarchy shared by every module.

The CLI maps :class:`LoopSliceError` subclasses to exit status 3 and
:class:`SchemaError` to exit status 2.
"""


class LoopSliceError(Exception):
    """Base class for mathematical failures."""


class PreconditionError(LoopSliceError, ValueError):
    """An operation was called outside its domain."""


class PrecisionError(LoopSliceError):
    """The available truncation order cannot decide the question asked."""


class IntegralityError(PreconditionError):
    """A lattice pair violates the integrality conditions."""


class FactorizationError(LoopSliceError):
    """No constants make the characteristic-polynomial identity hold."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class SchemaError(ValueError):
    """Malformed JSON input."""
