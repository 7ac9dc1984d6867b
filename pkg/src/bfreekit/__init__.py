"""Toolkit for B-free sequences: sieves, density certificates, constructions.

Builds and analyzes indicator sequences of integers free of multiples of a
base set: exact densities, Toeplitz-style period certificates, empirical
block statistics and entropy bounds, plus three constructions with
machine-checkable condition certificates and a CLI for archives, reports
and re-verification.
"""

from ._kernels import BACKEND as kernel_backend

__version__ = "0.1.0"

__all__ = ["kernel_backend", "__version__"]
