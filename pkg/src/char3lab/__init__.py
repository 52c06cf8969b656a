"""Exact audit laboratory for matrix permanents over characteristic-3 fields."""

__version__ = "0.1.0"
