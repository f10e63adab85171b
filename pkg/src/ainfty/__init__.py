"""Exact transferred A-infinity structures and Massey product sets for
finite-type DGAs over Q."""

__version__ = "0.1.0"
