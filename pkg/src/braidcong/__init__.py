"""Braid group congruence computations.

Exact Burau representations, transvection geometry, finite-quotient group
enumeration with witnesses, Todd-Coxeter coset enumeration, and a certified
engine factoring transvection powers into conjugated generator powers.
"""

from ._kernels import BACKEND
from .braid import BraidWord
from .burau import LatticeVector
from .exactmat import LaurentPoly, MatL, MatMod, MatZ

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BraidWord",
    "LatticeVector",
    "LaurentPoly",
    "MatL",
    "MatMod",
    "MatZ",
    "__version__",
]
