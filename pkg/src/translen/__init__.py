"""Asymptotic translation lengths in the arc complex from veering flow graphs."""

__version__ = "0.1.0"
