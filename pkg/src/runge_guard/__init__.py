"""Barycentric interpolation with borrowing-and-cutting for gyro-based attitude computation."""

__version__ = "0.1.0"
