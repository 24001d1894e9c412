"""Exact algebra for lattice pairs over Laurent series, slices and graded branching."""

from .errors import (
    FactorizationError,
    IntegralityError,
    LoopSliceError,
    PrecisionError,
    PreconditionError,
    SchemaError,
)

__version__ = "0.1.0"

__all__ = [
    "FactorizationError",
    "IntegralityError",
    "LoopSliceError",
    "PrecisionError",
    "PreconditionError",
    "SchemaError",
    "__version__",
]
