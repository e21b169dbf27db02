"""Sous-package « bootstrap » : poids, maximum de vraisemblance pondéré et ensembles."""
