"""Exact-arithmetic checks behind linear instability of Sasaki Einstein and nearly parallel G2 metrics."""

__version__ = "0.1.0"
