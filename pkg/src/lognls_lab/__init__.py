"""Numerical laboratory for the focusing logarithmic Schrodinger equation."""

__version__ = "0.1.0"
