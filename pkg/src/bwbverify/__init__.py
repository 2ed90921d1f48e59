"""Exact Borel-Weil-Bott, tensor and Ext computations on G/P, with a
proof-obligation checker for Lefschetz exceptional collections."""

__version__ = "0.1.0"
