"""Nonlocal (Levy-generator) quantum and semigroup dynamics on spectral grids."""

__version__ = "0.1.0"

from .errors import DomainError, GridWarning, UnsupportedRegimeError
from .grids import Grid1D, RadialGrid3D, WaveField

__all__ = [
    "DomainError",
    "GridWarning",
    "UnsupportedRegimeError",
    "Grid1D",
    "RadialGrid3D",
    "WaveField",
    "__version__",
]
