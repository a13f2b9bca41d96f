"""Lie random field star-algebra: symbolic engine, Fock hierarchy, numeric kernel models."""

__version__ = "0.1.0"
