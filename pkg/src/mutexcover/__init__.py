"""Compact ASP encodings of mutex constraints via multiclique edge covering."""

__version__ = "0.1.0"
