"""Exact computation of singular homology h0, h1 of one-dimensional arithmetic schemes."""

__version__ = "0.1.0"
