"""Exact enumeration and classification of 4-qubit Clifford states."""

__version__ = "0.1.0"
