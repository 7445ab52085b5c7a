"""Finite model laboratory for pre-topologies, pre-uniformities and pre-proximities."""

__version__ = "0.1.0"
