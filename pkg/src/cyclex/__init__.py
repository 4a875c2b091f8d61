"""Exact cyclic (co)homology workbench over the rationals."""

__version__ = "0.1.0"
