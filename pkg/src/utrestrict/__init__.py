"""Exact combinatorics of supercharacter restrictions for unitriangular groups."""

__version__ = "0.1.0"
