"""Sheaves on P1, P2, P1xP1 and stable quiver representations, with exact arithmetic."""

__version__ = "0.1.0"
