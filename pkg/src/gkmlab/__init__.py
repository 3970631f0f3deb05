"""Exact computations with abstract one-skeleta: cohomology, Thom classes, cross-sections and wall-crossing."""

__version__ = "0.1.0"
