"""Exact certificates for Sum-of-Squares hierarchy lower bounds.

Subpackages split along the math: exact scalars (exactnum), univariate
polynomials (unipoly), full moment matrices and exact PSD (moments), the
symmetry-reduced Hankel criterion (symsos), the explicit level lower-bound
certificates (certificates), and the empty-polytope rank machinery (laurentk).
"""

from ._backend import SEARCH_BACKEND
from .exactnum import BACKEND as RATIONAL_BACKEND
from .exactnum import Q

__version__ = "0.1.0"

__all__ = ["Q", "RATIONAL_BACKEND", "SEARCH_BACKEND", "__version__"]
