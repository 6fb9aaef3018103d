"""Exact computations with sl2 Bethe-ansatz populations and the Schrödinger
operators they define."""

__version__ = "0.1.0"
