"""Exact computations with the Frobenius properad and its cobar-of-bar resolution."""

from .exactalg import InputError, InvariantError
from .graphcore import CompositionError, GraphError, ResourceError

__version__ = "0.1.0"

__all__ = ["CompositionError", "GraphError", "InputError", "InvariantError", "ResourceError",
           "__version__"]
