"""Exact chain-level fixed-point computations on finite complexes."""

__version__ = "0.1.0"
