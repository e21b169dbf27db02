"""Sous-package « noyau » : types de probabilité, données, aléa et erreurs."""
