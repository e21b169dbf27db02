"""Incertitude épistémique des classifieurs probabilistes par bootstrap."""

__version__ = "1.0.0"
