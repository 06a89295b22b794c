"""Exact calculus on algebras carrying a non-degenerate associative pairing."""

__version__ = "0.1.0"
