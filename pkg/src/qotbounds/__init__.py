"""Numerical bounds on noisy quantum optimization, checked by exact simulation."""

__version__ = "0.1.0"
