"""Exact computations on Outer Space and its simplicial completion."""

__version__ = "0.1.0"
