"""Numerical toolkit for paper Moebius bands, T-patterns and the sqrt(3) bound."""

__version__ = "0.1.0"
