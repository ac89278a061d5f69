"""Exact and approximate counts of derangement conjugacy classes."""

__version__ = "0.1.0"
