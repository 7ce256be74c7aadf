"""Executable realizability by recognizable objects over hereditarily finite sets."""

__version__ = "0.1.0"
