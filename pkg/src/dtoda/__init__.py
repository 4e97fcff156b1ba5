"""Numerical laboratory for dispersionless Toda structures on conformal-map pairs."""

__version__ = "0.1.0"
