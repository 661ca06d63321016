"""Frequent star pattern detection and lossless factorization of RDF graphs."""

__version__ = "0.1.0"
