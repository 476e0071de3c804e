"""Tableau labellings of real Schubert intersections and their agreement."""

__version__ = "0.1.0"
