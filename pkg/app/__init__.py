"""Degree and clustering indices of graphs, random graph models and Monte Carlo experiments."""

__version__ = "1.0.0"
