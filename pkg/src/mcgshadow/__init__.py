"""Homology-and-puncture shadows of involution generating sets for mapping class groups."""

__version__ = "0.1.0"
