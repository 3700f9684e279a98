"""Exact singularity invariants from the combinatorics of a log resolution."""

__version__ = "0.1.0"
