"""Conflict sets for conjunctions of polynomial constraints over the reals."""

__version__ = "0.1.0"
