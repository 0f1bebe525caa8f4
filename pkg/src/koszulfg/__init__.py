"""Bounded computations around finite generation for graded symmetric algebras.

Quivers with relations and Gröbner bases (``core``, ``gb``), presentations of
finite-dimensional algebras and trivial extensions (``present``), potentials
and dimer models (``potential``, ``dimer``), graded modules and complexes
(``modcplx``), Ext tables and Koszul duals (``koszul``), truncated centers and
the end-to-end verdict (``centerfg``), and input/output (``io``, ``cli``).
"""
from .core import ArrowGrading, GradedPresentation, Path, PathElement, Quiver
from .errors import (InconclusiveError, KoszulFgError, ParameterError, ParseError,
                     StructuralError)
from .field import GF, QQ

__version__ = "0.1.0"

__all__ = [
    "ArrowGrading", "GradedPresentation", "Path", "PathElement", "Quiver", "GF", "QQ",
    "KoszulFgError", "InconclusiveError", "ParameterError", "ParseError", "StructuralError",
]
