"""Exact enumeration and verification of integer-distance planar polygons."""

__version__ = "0.1.0"
