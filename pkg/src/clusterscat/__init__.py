"""Cluster scattering diagrams and their theta functions in exact arithmetic."""

__version__ = "0.1.0"
