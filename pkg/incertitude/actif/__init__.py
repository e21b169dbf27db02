"""Sous-package « actif » : apprentissage actif par incertitude épistémique."""
