"""Convex-roof coherence measures and superadditivity checks."""

__version__ = "0.1.0"
