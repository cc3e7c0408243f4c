"""Essentially algebraic theories: presentation, saturation and finite checks."""

__version__ = "0.1.0"
