"""Exact slice-rank and strength computations with a re-runnable finite verification."""

__version__ = "0.1.0"
