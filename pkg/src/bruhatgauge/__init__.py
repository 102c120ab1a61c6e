"""Bruhat decompositions, bundle automorphisms on the projective line and
holomorphic gauges of logarithmic connections, all in exact arithmetic."""

__version__ = "0.1.0"
