"""Tensor-of-list values, the ToLang language, lowering to atomic form and EOPs accounting."""

from .core import ToLValue, TypeList, TypeSpace, make, scalar, tol, zeros
from .errors import ToLError

__version__ = "0.1.0"

__all__ = ["ToLValue", "TypeList", "TypeSpace", "ToLError", "make", "scalar", "tol", "zeros",
           "__version__"]
