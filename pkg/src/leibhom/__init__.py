"""Exact Lie and Leibniz homology of Lie algebras given by rational structure constants."""

__version__ = "0.1.0"
