"""Cogrowth coefficients of marked groups, computed exactly."""

__version__ = "0.1.0"
