"""Finite models of continuous lattices via proximity structures and covers."""

__version__ = "0.1.0"
