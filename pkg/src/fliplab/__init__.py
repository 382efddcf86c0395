"""Flip sparsification, separation-width and merge-width witnesses on small graphs."""

__version__ = "0.1.0"
