"""Semantically configurable consistency analysis of class and object diagrams."""

__version__ = "0.1.0"
