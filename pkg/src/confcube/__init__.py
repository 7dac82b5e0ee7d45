"""Discretized configuration spaces of graphs as cube complexes, with PL
Morse theory and integral homology for 3-strand graph braid groups."""

__version__ = "0.1.0"
