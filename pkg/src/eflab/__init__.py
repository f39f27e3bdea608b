"""Ehrenfeucht games, forest signatures and zero-one law experiments."""

__version__ = "0.1.0"
