"""Temporal spectrum analysis of satellite-to-ground-station visibility."""

__version__ = "0.1.0"
