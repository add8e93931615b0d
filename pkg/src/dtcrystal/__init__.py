"""Exact computations on the dissolving-crystal side of GW/DT."""

__version__ = "0.1.0"
