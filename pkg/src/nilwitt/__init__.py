"""Exact computations with Witt vectors, twisted nil categories and finite-group induction."""

__version__ = "0.1.0"
