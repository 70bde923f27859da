"""Certified Laurent-series computation of Tate and Artin-Schreier-Mumford deformation maps."""
__version__ = "0.1.0"
