"""Numerical toolkit for the Toda lattice, shift-of-argument families,
slice embeddings, and the stratified Hessenberg family, with verification
suites driven from a CLI."""

from .rootsys import RootSystem, build_root_system, height_spaces
from .liealg import AlgVec, LieAlgebra, build_lie_algebra
from .errors import ConfigurationError, DomainError, NumericalError

__all__ = [
    "RootSystem",
    "build_root_system",
    "height_spaces",
    "AlgVec",
    "LieAlgebra",
    "build_lie_algebra",
    "ConfigurationError",
    "DomainError",
    "NumericalError",
]

__version__ = "0.1.0"
