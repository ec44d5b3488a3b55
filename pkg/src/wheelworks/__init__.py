"""Exact computations around fully packed loops, wheel polynomials and the O(1) loop model."""

__version__ = "0.1.0"
