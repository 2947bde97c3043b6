"""Exact A-model and B-model series for the mirror quintic orbifold."""

__version__ = "0.1.0"
