"""Invariant GPR - physics-informed kriging surrogates for hyperelastic materials."""

__version__ = "1.0.0"
