"""Exact computations for Nijenhuis operator families on Omega-associative algebras."""

__version__ = "0.1.0"
