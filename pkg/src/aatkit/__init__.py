"""aatkit: exact certification of algebraic addition theorems and friends."""

from .scalars import GAUSS, RAT, GaussianRational
from .series import GermMap, TruncatedSeries
from .odegen import OdeSpec, generate_series

__all__ = [
    "GAUSS",
    "RAT",
    "GaussianRational",
    "GermMap",
    "TruncatedSeries",
    "OdeSpec",
    "generate_series",
]

__version__ = "0.1.0"
