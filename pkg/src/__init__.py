"""Exact and numeric verification of q-series identities."""

__version__ = "1.0.0"
