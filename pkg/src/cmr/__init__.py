"""Proof kernel and proof-to-program pipeline for a three-sorted
intuitionistic arithmetic, together with ordinal notation utilities."""

__version__ = "0.1.0"
