"""Boundary strata, multiplicities and chart equations for twisted k-differentials."""

__version__ = "0.1.0"
