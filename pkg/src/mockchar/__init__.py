"""Exact q-series for N=4 superconformal characters, mock modular forms and elliptic genera."""
from .errors import MockcharError
from .series import QSeries, SpecialPoint, YPoly

__version__ = "0.1.0"
__all__ = ["MockcharError", "QSeries", "SpecialPoint", "YPoly", "__version__"]
