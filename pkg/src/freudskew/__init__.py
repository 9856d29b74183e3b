"""Orthogonal and skew-orthogonal polynomials for the quartic Freud weight
``exp(-x**4 + t*x**2)``."""
__version__ = "0.1.0"
