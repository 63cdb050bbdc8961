"""Exact finite-stage computations around quantitative Schur properties."""

__version__ = "0.1.0"
