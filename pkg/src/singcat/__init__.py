"""Exact singularity invariants, matrix factorizations and dg singularity category classification."""

__version__ = "0.1.0"
